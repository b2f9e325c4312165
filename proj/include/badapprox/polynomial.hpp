#pragma once

#include <utility>
#include <vector>

#include "badapprox/rational.hpp"

namespace badapprox {

/// Dense univariate polynomial over Q, coefficients ascending, canonical
/// (no trailing zeros; the zero polynomial has an empty coefficient list).
class RatPoly {
    std::vector<Rat> c_;

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    static RatPoly constant(const Rat& a) { return RatPoly({a}); }
    static RatPoly x() { return RatPoly({Rat(0), Rat(1)}); }

    const std::vector<Rat>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    Rat coeff(size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }
    const Rat& lc() const {
        if (c_.empty()) throw Error("lc of zero polynomial");
        return c_.back();
    }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    bool is_integral() const {
        for (const auto& a : c_)
            if (!is_integer(a)) return false;
        return true;
    }

    bool operator==(const RatPoly& o) const { return c_ == o.c_; }

    RatPoly operator+(const RatPoly& o) const {
        std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
        for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
        return RatPoly(std::move(r));
    }
    RatPoly operator-(const RatPoly& o) const {
        std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
        for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
        return RatPoly(std::move(r));
    }
    RatPoly operator-() const {
        std::vector<Rat> r = c_;
        for (auto& a : r) a = -a;
        return RatPoly(std::move(r));
    }
    RatPoly operator*(const RatPoly& o) const {
        if (is_zero() || o.is_zero()) return RatPoly();
        std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return RatPoly(std::move(r));
    }
    RatPoly operator*(const Rat& s) const {
        std::vector<Rat> r = c_;
        for (auto& a : r) a *= s;
        return RatPoly(std::move(r));
    }

    RatPoly derivative() const {
        if (c_.size() <= 1) return RatPoly();
        std::vector<Rat> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Rat(static_cast<long>(i));
        return RatPoly(std::move(r));
    }

    // Euclidean division; divisor must be nonzero.
    std::pair<RatPoly, RatPoly> divrem(const RatPoly& d) const {
        if (d.is_zero()) throw DivisionByZero("polynomial division by zero");
        RatPoly q, r = *this;
        std::vector<Rat> qc(degree() >= d.degree() ? degree() - d.degree() + 1 : 0, Rat(0));
        while (!r.is_zero() && r.degree() >= d.degree()) {
            Rat f = r.lc() / d.lc();
            int k = r.degree() - d.degree();
            qc[k] = f;
            std::vector<Rat> sub(k + d.c_.size(), Rat(0));
            for (size_t i = 0; i < d.c_.size(); ++i) sub[k + i] = f * d.c_[i];
            r = r - RatPoly(std::move(sub));
        }
        return {RatPoly(std::move(qc)), r};
    }

    Rat eval(const Rat& x) const {
        Rat acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    // Evaluation at an exact complex rational point (re, im).
    std::pair<Rat, Rat> eval_complex(const Rat& re, const Rat& im) const {
        Rat ar(0), ai(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            Rat nr = ar * re - ai * im + *it;
            Rat ni = ar * im + ai * re;
            ar = nr;
            ai = ni;
        }
        return {ar, ai};
    }

    RatPoly monic() const {
        if (is_zero()) return *this;
        return *this * (Rat(1) / lc());
    }

    // 1 + max |c_i| / |lc|; every root has absolute value below this.
    Rat cauchy_bound() const {
        if (is_zero()) throw Error("cauchy bound of zero polynomial");
        Rat m(0);
        for (size_t i = 0; i + 1 < c_.size(); ++i) m = std::max(m, abs_rat(c_[i]));
        return Rat(1) + m / abs_rat(lc());
    }
};

inline RatPoly gcd(const RatPoly& a, const RatPoly& b) {
    RatPoly x = a, y = b;
    while (!y.is_zero()) {
        RatPoly r = x.divrem(y).second;
        x = y;
        y = r;
    }
    return x.is_zero() ? x : x.monic();
}

// g = gcd(a,b) monic, with u*a + v*b = g.
struct ExtGcd {
    RatPoly g, u, v;
};

inline ExtGcd ext_gcd(const RatPoly& a, const RatPoly& b) {
    RatPoly r0 = a, r1 = b;
    RatPoly u0 = RatPoly::constant(Rat(1)), u1;
    RatPoly v0, v1 = RatPoly::constant(Rat(1));
    while (!r1.is_zero()) {
        auto [q, r] = r0.divrem(r1);
        RatPoly u2 = u0 - q * u1, v2 = v0 - q * v1;
        r0 = r1; r1 = r;
        u0 = u1; u1 = u2;
        v0 = v1; v1 = v2;
    }
    if (r0.is_zero()) return {r0, u0, v0};
    Rat s = Rat(1) / r0.lc();
    return {r0 * s, u0 * s, v0 * s};
}

inline bool is_squarefree(const RatPoly& f) {
    RatPoly g = gcd(f, f.derivative());
    return g.degree() <= 0;
}

/// Sturm chain of a squarefree polynomial; exact real-root counting.
class SturmSeq {
    std::vector<RatPoly> seq_;

    static int sign_rat(const Rat& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

    int variations(const std::vector<int>& signs) const {
        int v = 0, last = 0;
        for (int s : signs) {
            if (s == 0) continue;
            if (last != 0 && s != last) ++v;
            last = s;
        }
        return v;
    }

public:
    explicit SturmSeq(const RatPoly& f) {
        seq_.push_back(f);
        RatPoly d = f.derivative();
        if (!d.is_zero()) seq_.push_back(d);
        while (seq_.size() >= 2 && !seq_.back().is_zero()) {
            RatPoly r = seq_[seq_.size() - 2].divrem(seq_.back()).second;
            if (r.is_zero()) break;
            seq_.push_back(-r);
        }
    }

    int variations_at(const Rat& x) const {
        std::vector<int> s;
        s.reserve(seq_.size());
        for (const auto& p : seq_) s.push_back(sign_rat(p.eval(x)));
        return variations(s);
    }

    int variations_at_neg_inf() const {
        std::vector<int> s;
        for (const auto& p : seq_) {
            if (p.is_zero()) { s.push_back(0); continue; }
            int lcs = sign_rat(p.lc());
            s.push_back(p.degree() % 2 == 0 ? lcs : -lcs);
        }
        return variations(s);
    }

    int variations_at_pos_inf() const {
        std::vector<int> s;
        for (const auto& p : seq_) s.push_back(p.is_zero() ? 0 : sign_rat(p.lc()));
        return variations(s);
    }

    // Number of distinct real roots in (a, b]; f(a), f(b) must be nonzero.
    int count_in(const Rat& a, const Rat& b) const {
        return variations_at(a) - variations_at(b);
    }

    int count_real_roots() const {
        return variations_at_neg_inf() - variations_at_pos_inf();
    }
};

// Clears denominators: returns (g, s) with g integral, primitive up to sign,
// and g = s * f for a positive rational s.
inline std::pair<RatPoly, Rat> integralize(const RatPoly& f) {
    Int l(1);
    for (const auto& a : f.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a.get_den_mpz_t());
    return {f * Rat(l), Rat(l)};
}

} // namespace badapprox
