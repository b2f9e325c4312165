#pragma once

#include <optional>
#include <vector>

#include "badapprox/embeddings.hpp"

namespace badapprox {

inline const Int kDefaultMaxDenominator = Int(1000000);

/// Why an element is certifiably not a square.
struct SquareObstruction {
    enum class Kind {
        ExactArith,   // rational case decided by integer square tests
        RealPlace,    // negative at a real embedding
        ModP,         // quadratic non-residue under a reduction map to F_p
        BoundedSearch // no square root with bounded coordinate denominators
    };
    Kind kind = Kind::ExactArith;
    int place_index = -1;
    Int prime = 0;
    Int theta_residue = 0;
    Int max_denominator = 0;

    std::string describe() const {
        switch (kind) {
            case Kind::ExactArith: return "exact rational arithmetic";
            case Kind::RealPlace:
                return "negative at real place " + std::to_string(place_index);
            case Kind::ModP:
                return "non-residue mod p=" + prime.get_str() +
                       " at theta=" + theta_residue.get_str();
            case Kind::BoundedSearch:
                return "no square root with coordinate denominators up to " +
                       max_denominator.get_str();
        }
        return "";
    }
};

struct SquareAnalysis {
    std::optional<FieldElem> root;
    std::optional<SquareObstruction> obstruction;
    bool is_square() const { return root.has_value(); }
};

namespace detail {

// Looks for an odd prime p (p coprime to disc(f) and to all coordinate
// denominators) and a root t of f mod p with a(t) a non-residue. Squares in
// the field reduce to squares under such a map, so a hit is a proof.
inline std::optional<std::pair<Int, Int>> modp_nonresidue(const FieldElem& a, long prime_limit) {
    const auto& F = a.field();
    Int disc = F->discriminant_of_poly();
    const auto& f = F->poly();
    int d = F->degree();
    std::vector<Int> fnum(d + 1), aden, anum;
    for (int i = 0; i <= d; ++i) fnum[i] = f.coeff(i).get_num();
    for (const auto& c : a.coords()) {
        anum.push_back(c.get_num());
        aden.push_back(c.get_den());
    }
    mpz_class p(3);
    while (p <= prime_limit) {
        bool bad = (mpz_divisible_p(disc.get_mpz_t(), p.get_mpz_t()) != 0);
        for (size_t i = 0; i < aden.size() && !bad; ++i)
            if (mpz_divisible_p(aden[i].get_mpz_t(), p.get_mpz_t())) bad = true;
        if (!bad) {
            long pl = p.get_si();
            std::vector<long> fc(d + 1), ac(anum.size());
            for (int i = 0; i <= d; ++i)
                fc[i] = mpz_fdiv_ui(fnum[i].get_mpz_t(), pl);
            for (size_t i = 0; i < anum.size(); ++i) {
                long n = mpz_fdiv_ui(anum[i].get_mpz_t(), pl);
                long dd = mpz_fdiv_ui(aden[i].get_mpz_t(), pl);
                // dd invertible mod p by the divisibility screen
                Int inv;
                Int ddz(dd);
                mpz_invert(inv.get_mpz_t(), ddz.get_mpz_t(), p.get_mpz_t());
                ac[i] = (n * inv.get_si()) % pl;
            }
            for (long t = 0; t < pl; ++t) {
                long ft = 0;
                for (int i = d; i >= 0; --i) ft = (ft * t + fc[i]) % pl;
                if (ft != 0) continue;
                long at = 0;
                for (long i = static_cast<long>(ac.size()) - 1; i >= 0; --i)
                    at = (at * t + ac[i]) % pl;
                if (at == 0) continue;
                Int az(at);
                if (mpz_legendre(az.get_mpz_t(), p.get_mpz_t()) == -1)
                    return std::make_pair(Int(p), Int(t));
            }
        }
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    }
    return std::nullopt;
}

// Dyadic approximation of sqrt(mid(z)) at the given precision, stable form.
inline void approx_sqrt_dyadic(const ComplexInterval& z, Rat& wr, Rat& wi, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 32;
    mpfr_t a, b, m, u, t;
    mpfr_inits2(wp, a, b, m, u, t, static_cast<mpfr_ptr>(nullptr));
    Rat zr = z.re.mid_q(), zi = z.im.mid_q();
    mpfr_set_q(a, zr.get_mpq_t(), MPFR_RNDN);
    mpfr_set_q(b, zi.get_mpq_t(), MPFR_RNDN);
    mpfr_hypot(m, a, b, MPFR_RNDN);
    mpfr_abs(t, a, MPFR_RNDN);
    mpfr_add(u, m, t, MPFR_RNDN);
    mpfr_div_ui(u, u, 2, MPFR_RNDN);
    mpfr_sqrt(u, u, MPFR_RNDN); // u = sqrt((|z| + |re|)/2)
    if (mpfr_zero_p(u)) {
        wr = 0;
        wi = 0;
    } else if (mpfr_sgn(a) >= 0) {
        mpfr_get_q(wr.get_mpq_t(), u);
        mpfr_div(t, b, u, MPFR_RNDN);
        mpfr_div_ui(t, t, 2, MPFR_RNDN);
        mpfr_get_q(wi.get_mpq_t(), t);
    } else {
        mpfr_abs(t, b, MPFR_RNDN);
        mpfr_div(t, t, u, MPFR_RNDN);
        mpfr_div_ui(t, t, 2, MPFR_RNDN);
        mpfr_get_q(wr.get_mpq_t(), t);
        mpfr_get_q(wi.get_mpq_t(), u);
        if (mpfr_sgn(b) < 0) wi = -wi;
    }
    mpfr_clears(a, b, m, u, t, static_cast<mpfr_ptr>(nullptr));
}

// Certified enclosure of one square root of the complex box z, around the
// exact dyadic approximation (wr, wi). Returns nullopt if the box is too
// wide for the contraction bound.
inline std::optional<ComplexInterval> certified_sqrt_box(const ComplexInterval& z, const Rat& wr,
                                                         const Rat& wi, mpfr_prec_t prec) {
    Rat w2r = wr * wr - wi * wi, w2i = 2 * wr * wi;
    ComplexInterval resid = z - ComplexInterval::from_rat(w2r, w2i, prec);
    Rat delta = resid.abs().hi_q();
    Rat wn2 = wr * wr + wi * wi;
    if (wn2 == 0 || delta > wn2 / 4) return std::nullopt;
    // |w - w_approx| <= delta / |w_approx| once delta <= |w_approx|^2 / 4
    Rat wn_lo = wn2 / sqrt_upper(wn2); // lower bound of sqrt(wn2)
    Rat rho = delta / wn_lo;
    return ComplexInterval(Interval::from_endpoints(wr - rho, wr + rho, prec),
                           Interval::from_endpoints(wi - rho, wi + rho, prec));
}

} // namespace detail

struct SquareOptions {
    Int max_denominator = kDefaultMaxDenominator;
    long prime_limit = 20000;
    mpfr_prec_t cap = kPrecisionCap;
};

/// Decides whether a is a square in F. Squares come back with an exact
/// verified root; non-squares with a machine-checkable obstruction. Raises
/// PrecisionExhausted when neither side can be settled within the caps.
inline SquareAnalysis analyze_square(const FieldElem& a, const EmbeddingSet& E,
                                     const SquareOptions& opts = {}) {
    const auto& F = a.field();
    if (a.is_zero()) return {F->zero(), std::nullopt};

    if (F->is_rationals()) {
        Rat v = a.rational_value();
        if (v < 0)
            return {std::nullopt,
                    SquareObstruction{SquareObstruction::Kind::RealPlace, 0, 0, 0, 0}};
        Int n = v.get_num(), d = v.get_den();
        if (mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t())) {
            Int sn, sd;
            mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
            mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
            return {F->from_rat(make_rat(sn, sd)), std::nullopt};
        }
        return {std::nullopt, SquareObstruction{SquareObstruction::Kind::ExactArith, 0, 0, 0, 0}};
    }

    EmbeddingSet cur = E;
    int n_places = F->num_places();
    int r = F->real_places();

    // Negative at any real place settles it.
    for (int i = 0; i < r; ++i) {
        EmbeddingSet probe = cur;
        while (true) {
            Interval vi = probe.embed(a).real[static_cast<size_t>(i)];
            if (vi.sign() < 0)
                return {std::nullopt,
                        SquareObstruction{SquareObstruction::Kind::RealPlace, i, 0, 0, 0}};
            if (vi.sign() > 0) break;
            if (probe.precision() * 2 > opts.cap)
                throw PrecisionExhausted("sign of embedding undecidable");
            probe = probe.refined(probe.precision() * 2, opts.cap);
        }
    }

    std::optional<SquareObstruction> modp_cert;

    for (mpfr_prec_t wp = cur.precision();; wp *= 2) {
        if (wp > opts.cap) {
            if (modp_cert) return {std::nullopt, modp_cert};
            throw PrecisionExhausted("square reconstruction inconclusive at precision cap");
        }
        cur = cur.refined(wp, opts.cap);
        auto av = cur.embed(a);

        // Certified square roots per place.
        std::vector<Interval> rts;
        bool roots_ok = true;
        for (int i = 0; i < r && roots_ok; ++i) {
            if (av.real[static_cast<size_t>(i)].sign() <= 0) {
                roots_ok = false;
                break;
            }
            rts.push_back(av.real[static_cast<size_t>(i)].sqrt());
        }
        std::vector<ComplexInterval> crts;
        for (int i = 0; i < F->complex_places() && roots_ok; ++i) {
            const auto& z = av.cplx[static_cast<size_t>(i)];
            Rat wr, wi;
            detail::approx_sqrt_dyadic(z, wr, wi, wp);
            auto box = detail::certified_sqrt_box(z, wr, wi, wp);
            if (!box) {
                roots_ok = false;
                break;
            }
            crts.push_back(*box);
        }

        if (roots_ok) {
            // Unique-candidate width requirement: below 1/max_den^2 per
            // coordinate, at most one rational with denominator <= max_den
            // fits an enclosure.
            Rat width_req = make_rat(Int(1), opts.max_denominator * opts.max_denominator * 2);
            bool all_excluded = true;
            size_t npat = size_t{1} << (n_places - 1);
            for (size_t pat = 0; pat < npat; ++pat) {
                IntervalVec v;
                for (int i = 0; i < r; ++i) {
                    bool flip = i > 0 && (pat >> (i - 1)) & 1;
                    v.real.push_back(flip ? -rts[static_cast<size_t>(i)]
                                          : rts[static_cast<size_t>(i)]);
                }
                for (int i = 0; i < F->complex_places(); ++i) {
                    int slot = r + i;
                    bool flip = slot > 0 && (pat >> (slot - 1)) & 1;
                    v.cplx.push_back(flip ? -crts[static_cast<size_t>(i)]
                                          : crts[static_cast<size_t>(i)]);
                }
                auto coords = cur.solve_coords(v.to_real_coords());
                bool narrow = true;
                for (const auto& c : coords)
                    if (Rat(c.hi_q() - c.lo_q()) > width_req) narrow = false;
                auto cand = rational_candidates(coords, opts.max_denominator);
                if (cand) {
                    FieldElem b = F->elem_from_basis(*cand);
                    if (b * b == a) return {b, std::nullopt};
                }
                if (!narrow) all_excluded = false;
            }
            if (all_excluded) {
                if (!modp_cert) {
                    if (auto hit = detail::modp_nonresidue(a, opts.prime_limit))
                        modp_cert = SquareObstruction{SquareObstruction::Kind::ModP, -1,
                                                      hit->first, hit->second, 0};
                }
                if (modp_cert) return {std::nullopt, modp_cert};
                return {std::nullopt,
                        SquareObstruction{SquareObstruction::Kind::BoundedSearch, -1, 0, 0,
                                          opts.max_denominator}};
            }
        }

        if (!modp_cert) {
            if (auto hit = detail::modp_nonresidue(a, opts.prime_limit))
                return {std::nullopt, SquareObstruction{SquareObstruction::Kind::ModP, -1,
                                                        hit->first, hit->second, 0}};
        }
    }
}

inline std::optional<FieldElem> is_square(const FieldElem& a, const EmbeddingSet& E,
                                          const SquareOptions& opts = {}) {
    return analyze_square(a, E, opts).root;
}

/// The conjugation automorphism of a CM field and its fixed subfield.
struct CMStructure {
    FieldPtr F;
    FieldElem conj_image;               // tau(theta)
    detail::QMatrix tau_matrix;         // action on power-basis coordinates
    std::vector<FieldElem> fixed_basis; // spans the maximal totally real subfield

    CMStructure(FieldPtr f, FieldElem c, detail::QMatrix m, std::vector<FieldElem> fb)
        : F(std::move(f)),
          conj_image(std::move(c)),
          tau_matrix(std::move(m)),
          fixed_basis(std::move(fb)) {}

    FieldElem tau(const FieldElem& a) const {
        if (a.field().get() != F.get()) throw MixedFields("tau: element of another field");
        return FieldElem(F, tau_matrix.apply(a.coords()));
    }
    bool is_fixed(const FieldElem& a) const { return tau(a) == a; }
    size_t subfield_degree() const { return fixed_basis.size(); }
};

/// Finds complex conjugation on a totally imaginary field: tau(theta) is the
/// element whose embedding images are the conjugates of theta's, recovered by
/// inverting the embedding matrix and verified exactly.
inline CMStructure cm_structure(const FieldPtr& F, const EmbeddingSet& E,
                                const Int& max_den = kDefaultMaxDenominator,
                                mpfr_prec_t cap = kPrecisionCap) {
    if (F->real_places() != 0 || F->degree() < 2)
        throw NotCM("field has a real place; CM fields are totally imaginary");
    int d = F->degree(), s = F->complex_places();

    EmbeddingSet cur = E;
    for (mpfr_prec_t wp = cur.precision();; wp *= 2) {
        if (wp > cap) throw NotCM("no conjugation automorphism found within bounds");
        cur = cur.refined(wp, cap);
        IntervalVec v;
        for (const auto& box : cur.complex_root_boxes()) v.cplx.push_back(box.conj());
        // Power-basis target: solve in the power frame, which equals the
        // basis frame composed with the basis matrix.
        auto coords = cur.solve_coords(v.to_real_coords());
        auto cand = rational_candidates(coords, max_den);
        if (!cand) continue;
        FieldElem c = F->elem_from_basis(*cand);
        // Exact verification: f(c) = 0, involution, and not the identity.
        FieldElem fc = F->zero();
        FieldElem cp = F->one();
        for (int k = 0; k <= F->poly().degree(); ++k) {
            fc = fc + cp * F->poly().coeff(static_cast<size_t>(k));
            if (k < F->poly().degree()) cp = cp * c;
        }
        if (!fc.is_zero()) continue;
        if (c == F->theta()) throw NotCM("conjugation candidate equals the identity");
        detail::QMatrix T(static_cast<size_t>(d), static_cast<size_t>(d));
        FieldElem pw = F->one();
        for (int k = 0; k < d; ++k) {
            for (int i = 0; i < d; ++i)
                T(static_cast<size_t>(i), static_cast<size_t>(k)) =
                    pw.coords()[static_cast<size_t>(i)];
            pw = pw * c;
        }
        if (!(T * T == detail::QMatrix::identity(static_cast<size_t>(d))))
            throw NotCM("conjugation candidate is not an involution");

        // Certified conjugation at every place: sigma_i(c) must land in the
        // conjugate of theta's i-th root box and in no other root region.
        auto cv = cur.embed(c);
        bool placed = true;
        for (int i = 0; i < s && placed; ++i) {
            const auto& img = cv.cplx[static_cast<size_t>(i)];
            const auto& target = cur.complex_root_boxes()[static_cast<size_t>(i)];
            ComplexInterval conj_target = target.conj();
            // img encloses a root of f; if it avoids every root region other
            // than conj_target, sigma_i(c) = conj(sigma_i(theta)).
            if (img.re.certainly_lt(conj_target.re) || conj_target.re.certainly_lt(img.re) ||
                img.im.certainly_lt(conj_target.im) || conj_target.im.certainly_lt(img.im)) {
                placed = false;
                break;
            }
            for (int j = 0; j < s; ++j) {
                const auto& other = cur.complex_root_boxes()[static_cast<size_t>(j)];
                bool hits_upper = !(img.re.certainly_lt(other.re) ||
                                    other.re.certainly_lt(img.re) ||
                                    img.im.certainly_lt(other.im) ||
                                    other.im.certainly_lt(img.im));
                ComplexInterval oc = other.conj();
                bool hits_lower = j != i && !(img.re.certainly_lt(oc.re) ||
                                              oc.re.certainly_lt(img.re) ||
                                              img.im.certainly_lt(oc.im) ||
                                              oc.im.certainly_lt(img.im));
                if (hits_upper || hits_lower) {
                    placed = false;
                    break;
                }
            }
        }
        if (!placed) continue;

        detail::QMatrix TmI = T;
        for (int i = 0; i < d; ++i)
            TmI(static_cast<size_t>(i), static_cast<size_t>(i)) -= 1;
        auto ker = TmI.kernel();
        if (static_cast<int>(ker.size()) != s)
            throw NotCM("fixed subspace has unexpected dimension");
        std::vector<FieldElem> fixed;
        for (auto& vec : ker) {
            Int l(1);
            for (const auto& q : vec) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
            for (auto& q : vec) q *= Rat(l);
            fixed.push_back(F->elem(vec));
        }
        return CMStructure(F, c, T, std::move(fixed));
    }
}

/// N^F_E(a) = a * tau(a); always tau-fixed.
inline FieldElem relative_norm(const FieldElem& a, const CMStructure& cm) {
    FieldElem n = a * cm.tau(a);
    if (!cm.is_fixed(n)) throw Error("internal: relative norm not tau-fixed");
    return n;
}

} // namespace badapprox
