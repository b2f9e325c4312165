#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "badapprox/errors.hpp"

namespace badapprox {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Int num(const Rat& r) { return r.get_num(); }
inline Int den(const Rat& r) { return r.get_den(); }

inline Int floor_rat(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Int ceil_rat(const Rat& r) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

// Nearest integer, half away from zero.
inline Int round_rat(const Rat& r) {
    Rat shifted = r + Rat(r >= 0 ? 1 : -1, 2);
    return r >= 0 ? floor_rat(shifted) : ceil_rat(shifted);
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// Parses "n", "n/d", or a plain decimal like "-0.25".
inline Rat parse_rational(std::string s) {
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    if (s.empty()) throw ParseError("empty rational literal");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t frac_len = s.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw ParseError("bad decimal literal: " + s);
        Int n;
        if (mpz_set_str(n.get_mpz_t(), digits.c_str(), 10) != 0)
            throw ParseError("bad decimal literal: " + s);
        Int d;
        mpz_ui_pow_ui(d.get_mpz_t(), 10, frac_len);
        return make_rat(n, d);
    }
    Rat r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
        throw ParseError("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

// Rational with the smallest denominator in the closed interval [lo, hi].
// Classic continued-fraction walk; total for all rationals.
inline Rat simplest_in_interval(const Rat& lo, const Rat& hi) {
    if (lo > hi) throw Error("simplest_in_interval: empty interval");
    // Integer in range?
    Int a = ceil_rat(lo), b = floor_rat(hi);
    if (a <= b) {
        if (a <= 0 && 0 <= b) return Rat(0);
        return a > 0 ? Rat(a) : Rat(b);
    }
    Int f = floor_rat(lo); // == floor(hi), no integer inside
    Rat rl = lo - Rat(f), rh = hi - Rat(f);
    // 0 < rl <= rh < 1; recurse on reciprocals (swapped order)
    Rat inner = simplest_in_interval(Rat(1) / rh, Rat(1) / rl);
    return Rat(f) + Rat(1) / inner;
}

// Upper bound on sqrt(q) as a rational, within relative 2^-bits; q >= 0.
inline Rat sqrt_upper(const Rat& q, unsigned bits = 64) {
    if (q < 0) throw Error("sqrt_upper of negative rational");
    if (q == 0) return Rat(0);
    // Shift so the integer square root carries ~bits significant bits no
    // matter the magnitude of q.
    long nbits = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2));
    long dbits = static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
    long shift = 2 * static_cast<long>(bits) + std::max(0L, dbits - nbits + 2);
    if (shift % 2 != 0) ++shift;
    Int t;
    mpz_mul_2exp(t.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(shift));
    t /= q.get_den();
    t += 1;
    Int s;
    mpz_sqrt(s.get_mpz_t(), t.get_mpz_t());
    s += 1;
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(shift / 2));
    return make_rat(s, scale);
}

inline Rat abs_rat(const Rat& r) { return r >= 0 ? r : Rat(-r); }

} // namespace badapprox
