#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "badapprox/forms.hpp"

namespace badapprox {

inline int legendre(const Int& a, const Int& p) {
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

namespace detail {

inline unsigned long v_adic(Int& n, const Int& p) {
    unsigned long v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        n /= p;
        ++v;
    }
    return v;
}

inline int eps4(const Int& u) { return mpz_fdiv_ui(u.get_mpz_t(), 4) == 3 ? 1 : 0; }
inline int omega8(const Int& u) {
    unsigned long m = mpz_fdiv_ui(u.get_mpz_t(), 8);
    return (m == 3 || m == 5) ? 1 : 0;
}

} // namespace detail

/// Hilbert symbol (a, b)_p over Q; p = 0 denotes the infinite place.
inline int hilbert_symbol(const Rat& a, const Rat& b, const Int& p) {
    if (a == 0 || b == 0) throw Error("hilbert symbol of zero");
    Int A = a.get_num() * a.get_den(); // same square class as a
    Int B = b.get_num() * b.get_den();
    if (p == 0) return (A < 0 && B < 0) ? -1 : 1;
    if (p == 2) {
        Int u = A, v = B;
        unsigned long al = detail::v_adic(u, Int(2));
        unsigned long be = detail::v_adic(v, Int(2));
        int e = detail::eps4(u) * detail::eps4(v) + static_cast<int>(al % 2) * detail::omega8(v) +
                static_cast<int>(be % 2) * detail::omega8(u);
        return e % 2 ? -1 : 1;
    }
    Int u = A, v = B;
    unsigned long al = detail::v_adic(u, p);
    unsigned long be = detail::v_adic(v, p);
    int sign = 1;
    if ((al % 2) && (be % 2) && mpz_fdiv_ui(p.get_mpz_t(), 4) == 3) sign = -sign;
    if (be % 2) sign *= legendre(u, p);
    if (al % 2) sign *= legendre(v, p);
    return sign;
}

/// Odd prime divisors by trial division; a remaining cofactor above the
/// limit must pass a strong primality test or the factorization is refused.
inline std::optional<std::vector<Int>> odd_prime_divisors(Int n, long limit = 1000000) {
    std::vector<Int> out;
    if (n == 0) throw Error("prime divisors of zero");
    if (n < 0) n = -n;
    while (mpz_even_p(n.get_mpz_t())) n /= 2;
    Int d(3);
    while (d * d <= n && d <= limit) {
        if (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
            out.push_back(d);
            while (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) n /= d;
        }
        d += 2;
    }
    if (n > 1) {
        if (d * d > n) {
            out.push_back(n); // no divisor up to sqrt(n): prime
        } else if (mpz_probab_prime_p(n.get_mpz_t(), 40) > 0) {
            out.push_back(n); // BPSW + Miller-Rabin; no failures known
        } else {
            return std::nullopt;
        }
    }
    return out;
}

struct NormDecision {
    bool is_norm = false;
    Int obstruction_place = -1; // 0 = infinite place, otherwise the prime
};

/// Is c a norm from Q(sqrt(delta)) (delta < 0)? Exact local-global decision:
/// c is a norm iff (c, delta)_v = 1 at v = infinity, 2, and every odd prime
/// dividing delta or the numerator/denominator of c.
inline std::optional<NormDecision> is_norm_imag_quadratic(const Rat& c, const Int& delta,
                                                          long factor_limit = 1000000) {
    if (c == 0) return NormDecision{true, -1};
    if (delta >= 0) throw Error("is_norm_imag_quadratic requires delta < 0");
    auto pc = odd_prime_divisors(c.get_num() * c.get_den(), factor_limit);
    auto pd = odd_prime_divisors(delta, factor_limit);
    if (!pc || !pd) return std::nullopt;
    // Odd primes first (ascending) so a reported obstruction names the
    // natural finite prime; 2 and the infinite place close the list.
    std::vector<Int> places;
    for (const auto& p : *pc) places.push_back(p);
    for (const auto& p : *pd)
        if (std::find(places.begin(), places.end(), p) == places.end()) places.push_back(p);
    std::sort(places.begin(), places.end());
    places.push_back(Int(2));
    places.push_back(Int(0));
    Rat dq(delta);
    for (const auto& v : places)
        if (hilbert_symbol(c, dq, v) == -1) return NormDecision{false, v};
    return NormDecision{true, -1};
}

/// Verdict with a machine-checkable certificate on either side.
struct AnisotropyVerdict {
    enum class Status { Anisotropic, Isotropic, Unknown };
    Status status = Status::Unknown;
    std::string certificate;
    std::optional<FieldElem> isotropy_sqrt;  // quad: exact sqrt(-Delta)
    std::optional<FieldElem> norm_preimage;  // herm: x with N(x) = -Delta
    std::optional<std::pair<FieldElem, FieldElem>> witness_zero;
    std::optional<SquareObstruction> square_obstruction;
    std::optional<Int> obstruction_prime; // 0 encodes the infinite place
    long search_height = 0;

    bool anisotropic() const { return status == Status::Anisotropic; }
    bool isotropic() const { return status == Status::Isotropic; }
};

/// Quadratic case: anisotropic iff -Delta is not a square in F.
inline AnisotropyVerdict is_anisotropic_quad(const QuadForm& Q, const EmbeddingSet& E,
                                             const SquareOptions& opts = {}) {
    FieldElem delta = Q.discriminant();
    if (delta.is_zero()) throw DegenerateForm("form has zero discriminant");
    AnisotropyVerdict v;
    SquareAnalysis sq;
    try {
        sq = analyze_square(-delta, E, opts);
    } catch (const PrecisionExhausted&) {
        v.status = AnisotropyVerdict::Status::Unknown;
        v.certificate = "square test inconclusive at precision cap";
        return v;
    }
    const auto& F = Q.field();
    if (sq.is_square()) {
        FieldElem b = *sq.root;
        v.status = AnisotropyVerdict::Status::Isotropic;
        v.isotropy_sqrt = b;
        FieldElem x = Q.A.is_zero() ? F->one() : -Q.B + b * Rat(2);
        FieldElem y = Q.A.is_zero() ? F->zero() : Q.A * Rat(2);
        if (!(Q.evaluate(x, y) == F->zero())) throw Error("internal: constructed zero fails");
        v.witness_zero = std::make_pair(x, y);
        v.certificate = "exact square root of -Delta with verified zero";
    } else {
        v.status = AnisotropyVerdict::Status::Anisotropic;
        v.square_obstruction = sq.obstruction;
        v.certificate = "-Delta is not a square: " + sq.obstruction->describe();
    }
    return v;
}

struct HermSearchOptions {
    long initial_height = 12;
    long max_height = 800;       // witness search escalation bound (E = Q)
    long general_height = 6;     // coordinate box for general CM fields
    long factor_limit = 1000000;
    mpfr_prec_t cap = kPrecisionCap;
};

namespace detail {

// Zero of H from a norm preimage x with N(x) = -Delta, scaled integral.
inline std::pair<FieldElem, FieldElem> zero_from_preimage(const HermForm& H,
                                                          const FieldElem& x) {
    const auto& F = H.field();
    FieldElem z = F->zero(), w = F->zero();
    if (H.A.is_zero()) {
        z = F->one();
        w = F->zero();
    } else {
        z = (x - H.B) / H.A;
        w = F->one();
        Int l(1);
        for (const auto& c : z.basis_coords())
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
        z = z * Rat(l);
        w = w * Rat(l);
    }
    if (!(H.evaluate(z, w) == F->zero())) throw Error("internal: constructed zero fails");
    return {z, w};
}

// Escalating search for p^2 - u p q + w q^2 = c W^2 in the quadratic case
// (theta has minimal polynomial x^2 + u x + w).
inline std::optional<FieldElem> quadratic_norm_preimage(const FieldPtr& F, const Rat& c,
                                                        long max_height) {
    // N(p + q theta) = p^2 - u p q + w q^2 for f = x^2 + u x + w
    Int ucoef = F->poly().coeff(1).get_num();
    Int wcoef = F->poly().coeff(0).get_num();
    for (long h = 12; h <= max_height; h *= 2) {
        for (long W = 1; W <= h; ++W) {
            Rat target = c * Rat(W) * Rat(W);
            if (!is_integer(target)) continue;
            Int T = target.get_num();
            for (long p = -h; p <= h; ++p)
                for (long q = -h; q <= h; ++q) {
                    Int val = Int(p) * p - ucoef * p * q + wcoef * Int(q) * q;
                    if (val == T) {
                        std::vector<Rat> coords(2, Rat(0));
                        coords[0] = make_rat(Int(p), Int(W));
                        coords[1] = make_rat(Int(q), Int(W));
                        return F->elem(coords);
                    }
                }
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Hermitian case, two-pronged: an exact Hilbert-symbol decision when the
/// fixed subfield is Q, otherwise a bounded norm-preimage search with an
/// honest Unknown when nothing certifies.
inline AnisotropyVerdict is_anisotropic_herm(const HermForm& H, const EmbeddingSet& E,
                                             const HermSearchOptions& opts = {}) {
    FieldElem delta = H.discriminant();
    if (delta.is_zero()) throw DegenerateForm("form has zero discriminant");
    FieldElem target = -delta; // anisotropic iff target is not a relative norm
    const auto& F = H.field();
    const auto& cm = H.cm;
    AnisotropyVerdict v;

    // Archimedean screen: relative norms are totally positive.
    bool tot_pos = true;
    for (int i = 0; i < F->complex_places() && tot_pos; ++i)
        if (detail::certified_sign_complex_place(target, E, i, opts.cap) < 0) tot_pos = false;
    if (!tot_pos) {
        v.status = AnisotropyVerdict::Status::Anisotropic;
        v.obstruction_prime = Int(0);
        v.certificate = "-Delta is negative at an archimedean place";
        return v;
    }

    if (cm.subfield_degree() == 1 && F->degree() == 2) {
        // F = Q(sqrt(delta_F)) imaginary quadratic; exact decision.
        Int u = F->poly().coeff(1).get_num(), w = F->poly().coeff(0).get_num();
        Int deltaF = u * u - 4 * w;
        Rat c = target.rational_value();
        auto dec = is_norm_imag_quadratic(c, deltaF, opts.factor_limit);
        if (dec) {
            if (!dec->is_norm) {
                v.status = AnisotropyVerdict::Status::Anisotropic;
                v.obstruction_prime = dec->obstruction_place;
                v.certificate = "Hilbert symbol obstruction at " +
                                (dec->obstruction_place == 0
                                     ? std::string("the infinite place")
                                     : "p=" + dec->obstruction_place.get_str());
                return v;
            }
            auto pre = detail::quadratic_norm_preimage(F, c, opts.max_height);
            if (!pre) {
                // The norm exists; only the witness search ran out of room.
                v.status = AnisotropyVerdict::Status::Unknown;
                v.certificate = "norm by Hilbert symbols but no witness within height " +
                                std::to_string(opts.max_height);
                v.search_height = opts.max_height;
                return v;
            }
            if (!(relative_norm(*pre, cm) == target))
                throw Error("internal: norm preimage fails verification");
            v.status = AnisotropyVerdict::Status::Isotropic;
            v.norm_preimage = pre;
            v.witness_zero = detail::zero_from_preimage(H, *pre);
            v.certificate = "norm preimage with verified zero";
            return v;
        }
        v.status = AnisotropyVerdict::Status::Unknown;
        v.certificate = "could not factor the discriminant data for the Hilbert test";
        return v;
    }

    // General CM field: bounded search over x = e / W with integral e.
    long h = opts.general_height;
    int d = F->degree();
    std::vector<long> idx(static_cast<size_t>(d), -h);
    bool done = false;
    while (!done) {
        bool nonzero = false;
        for (long c : idx)
            if (c != 0) nonzero = true;
        if (nonzero) {
            std::vector<Rat> coords;
            coords.reserve(static_cast<size_t>(d));
            for (long c : idx) coords.emplace_back(c);
            FieldElem e = F->elem_from_basis(coords);
            FieldElem n = relative_norm(e, cm);
            // N(e / W) = target  <=>  N(e) = target * W^2
            FieldElem ratio_num = n;
            for (long W = 1; W <= h; ++W) {
                if (ratio_num == target * Rat(Int(W) * W)) {
                    FieldElem x = e * make_rat(Int(1), Int(W));
                    v.status = AnisotropyVerdict::Status::Isotropic;
                    v.norm_preimage = x;
                    v.witness_zero = detail::zero_from_preimage(H, x);
                    v.certificate = "norm preimage with verified zero (bounded search)";
                    v.search_height = h;
                    return v;
                }
            }
        }
        int pos = 0;
        while (pos < d) {
            if (idx[static_cast<size_t>(pos)] < h) {
                ++idx[static_cast<size_t>(pos)];
                break;
            }
            idx[static_cast<size_t>(pos)] = -h;
            ++pos;
        }
        if (pos == d) done = true;
    }
    v.status = AnisotropyVerdict::Status::Unknown;
    v.search_height = h;
    v.certificate = "no norm preimage with coordinate height up to " + std::to_string(h) +
                    "; no exact test available for this fixed subfield";
    return v;
}

} // namespace badapprox
