#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "badapprox/interval.hpp"
#include "badapprox/number_field.hpp"

namespace badapprox {

inline constexpr mpfr_prec_t kDefaultPrecision = 256;
inline constexpr mpfr_prec_t kPrecisionCap = 4096;

/// sigma(x) = (sigma_1(x), ..., sigma_{r+s}(x)) as certified enclosures:
/// r real intervals followed by s complex boxes (positive imaginary part).
struct IntervalVec {
    std::vector<Interval> real;
    std::vector<ComplexInterval> cplx;

    size_t places() const { return real.size() + cplx.size(); }

    Interval abs_max() const {
        std::optional<Interval> m;
        for (const auto& v : real) m = m ? m->max_with(v.abs()) : v.abs();
        for (const auto& v : cplx) m = m ? m->max_with(v.abs()) : v.abs();
        if (!m) throw Error("abs_max of empty vector");
        return *m;
    }

    // Flattened real coordinates: the r real values, then (Re, Im) per
    // complex place. This is the frame the embedding matrix acts on.
    std::vector<Interval> to_real_coords() const {
        std::vector<Interval> out;
        out.reserve(real.size() + 2 * cplx.size());
        for (const auto& v : real) out.push_back(v);
        for (const auto& v : cplx) {
            out.push_back(v.re);
            out.push_back(v.im);
        }
        return out;
    }
};

namespace detail {

using IMat = std::vector<std::vector<Interval>>;

inline std::vector<Interval> imat_apply(const IMat& A, const std::vector<Interval>& v) {
    std::vector<Interval> r;
    r.reserve(A.size());
    for (const auto& row : A) {
        Interval acc(row.empty() ? 64 : row[0].prec());
        for (size_t j = 0; j < row.size(); ++j) acc = acc + row[j] * v[j];
        r.push_back(acc);
    }
    return r;
}

// Gauss-Jordan inverse with midpoint pivoting. Result encloses the exact
// inverse of every point matrix inside A; throws if a pivot straddles zero.
inline IMat imat_inverse(const IMat& A) {
    size_t n = A.size();
    IMat aug = A, inv(n);
    mpfr_prec_t prec = A.empty() ? 64 : A[0][0].prec();
    for (size_t i = 0; i < n; ++i) {
        inv[i].assign(n, Interval::from_int(0, prec));
        inv[i][i] = Interval::from_int(1, prec);
    }
    for (size_t col = 0; col < n; ++col) {
        size_t best = col;
        double bestmag = -1;
        for (size_t i = col; i < n; ++i) {
            if (aug[i][col].contains_zero()) continue;
            double mag = std::min(std::abs(aug[i][col].lo_d()), std::abs(aug[i][col].hi_d()));
            if (mag > bestmag) {
                bestmag = mag;
                best = i;
            }
        }
        if (bestmag < 0) throw PrecisionExhausted("singular or undecidable pivot in interval inverse");
        std::swap(aug[best], aug[col]);
        std::swap(inv[best], inv[col]);
        Interval p = aug[col][col];
        for (size_t j = 0; j < n; ++j) {
            aug[col][j] = aug[col][j] / p;
            inv[col][j] = inv[col][j] / p;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == col) continue;
            Interval f = aug[i][col];
            if (f.contains_zero() && f.lo_d() == 0 && f.hi_d() == 0) continue;
            for (size_t j = 0; j < n; ++j) {
                aug[i][j] = aug[i][j] - f * aug[col][j];
                inv[i][j] = inv[i][j] - f * inv[col][j];
            }
        }
    }
    return inv;
}

// Horner evaluation of a rational-coefficient polynomial on enclosures.
inline Interval eval_poly_iv(const RatPoly& p, const Interval& x, mpfr_prec_t prec) {
    Interval acc = Interval::from_int(0, prec);
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * x + Interval::from_rat(*it, prec);
    return acc;
}

inline ComplexInterval eval_poly_iv(const RatPoly& p, const ComplexInterval& x, mpfr_prec_t prec) {
    ComplexInterval acc(Interval::from_int(0, prec), Interval::from_int(0, prec));
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x;
        acc.re = acc.re + Interval::from_rat(*it, prec);
    }
    return acc;
}

// Newton polish of a complex root approximation at the given precision.
// Plain rounding; the caller certifies the result exactly afterwards.
struct MpfrCplx {
    mpfr_t re, im;
    explicit MpfrCplx(mpfr_prec_t p) {
        mpfr_init2(re, p);
        mpfr_init2(im, p);
    }
    ~MpfrCplx() {
        mpfr_clear(re);
        mpfr_clear(im);
    }
    MpfrCplx(const MpfrCplx&) = delete;
    MpfrCplx& operator=(const MpfrCplx&) = delete;
};

inline void newton_polish_complex(const RatPoly& f, Rat& re, Rat& im, mpfr_prec_t prec,
                                  int iterations) {
    mpfr_prec_t wp = prec + 64;
    MpfrCplx z(wp), fz(wp), dz(wp), t(wp);
    mpfr_t n2, tr, ti;
    mpfr_init2(n2, wp);
    mpfr_init2(tr, wp);
    mpfr_init2(ti, wp);
    mpfr_set_q(z.re, re.get_mpq_t(), MPFR_RNDN);
    mpfr_set_q(z.im, im.get_mpq_t(), MPFR_RNDN);
    RatPoly fp = f.derivative();
    auto eval_at = [&](const RatPoly& p, MpfrCplx& out) {
        mpfr_set_zero(out.re, 1);
        mpfr_set_zero(out.im, 1);
        const auto& c = p.coeffs();
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            // out = out * z + coeff
            mpfr_mul(tr, out.re, z.re, MPFR_RNDN);
            mpfr_mul(ti, out.im, z.im, MPFR_RNDN);
            mpfr_sub(tr, tr, ti, MPFR_RNDN);
            mpfr_mul(ti, out.re, z.im, MPFR_RNDN);
            mpfr_mul(out.im, out.im, z.re, MPFR_RNDN);
            mpfr_add(out.im, out.im, ti, MPFR_RNDN);
            mpfr_set(out.re, tr, MPFR_RNDN);
            mpfr_add_q(out.re, out.re, it->get_mpq_t(), MPFR_RNDN);
        }
    };
    for (int k = 0; k < iterations; ++k) {
        eval_at(f, fz);
        eval_at(fp, dz);
        // t = fz / dz
        mpfr_mul(tr, dz.re, dz.re, MPFR_RNDN);
        mpfr_mul(ti, dz.im, dz.im, MPFR_RNDN);
        mpfr_add(n2, tr, ti, MPFR_RNDN);
        if (mpfr_zero_p(n2)) break;
        mpfr_mul(tr, fz.re, dz.re, MPFR_RNDN);
        mpfr_mul(ti, fz.im, dz.im, MPFR_RNDN);
        mpfr_add(t.re, tr, ti, MPFR_RNDN);
        mpfr_div(t.re, t.re, n2, MPFR_RNDN);
        mpfr_mul(tr, fz.im, dz.re, MPFR_RNDN);
        mpfr_mul(ti, fz.re, dz.im, MPFR_RNDN);
        mpfr_sub(t.im, tr, ti, MPFR_RNDN);
        mpfr_div(t.im, t.im, n2, MPFR_RNDN);
        mpfr_sub(z.re, z.re, t.re, MPFR_RNDN);
        mpfr_sub(z.im, z.im, t.im, MPFR_RNDN);
    }
    mpfr_get_q(re.get_mpq_t(), z.re);
    mpfr_get_q(im.get_mpq_t(), z.im);
    mpfr_clear(n2);
    mpfr_clear(tr);
    mpfr_clear(ti);
}

} // namespace detail

struct RealRootEnclosure {
    Rat lo, hi; // f(lo) f(hi) < 0, or lo == hi at an exact rational root
};

struct ComplexRootEnclosure {
    Rat re, im, rad; // certified disk with exactly one root; im - rad > 0
};

/// Certified images of theta under the r real and s complex places, with a
/// fixed ordering: real roots ascending; complex roots (positive imaginary
/// part) by real part, then imaginary part.
class EmbeddingSet {
    FieldPtr F_;
    mpfr_prec_t prec_;
    std::vector<RealRootEnclosure> real_;
    std::vector<ComplexRootEnclosure> cplx_;
    std::vector<Interval> real_iv_;
    std::vector<ComplexInterval> cplx_iv_;
    detail::IMat M_, Minv_; // over the integral basis, real-coordinate frame

    EmbeddingSet(FieldPtr F, mpfr_prec_t prec) : F_(std::move(F)), prec_(prec) {}

    static int sign_at(const RatPoly& f, const Rat& x) {
        Rat v = f.eval(x);
        return v > 0 ? 1 : (v < 0 ? -1 : 0);
    }

    // Exact bisection until width <= 2^-prec * max(1, |root|).
    static void refine_real(const RatPoly& f, Rat& lo, Rat& hi, mpfr_prec_t prec) {
        if (lo == hi) return;
        int slo = sign_at(f, lo);
        Rat scale = std::max(abs_rat(lo), abs_rat(hi));
        if (scale < 1) scale = 1;
        Rat target = scale;
        mpz_mul_2exp(target.get_den_mpz_t(), target.get_den_mpz_t(), prec);
        target.canonicalize();
        while (hi - lo > target) {
            Rat mid = (lo + hi) / 2;
            int sm = sign_at(f, mid);
            if (sm == 0) {
                lo = mid;
                hi = mid;
                return;
            }
            if (sm == slo)
                lo = mid;
            else
                hi = mid;
        }
    }

    void build_interval_forms() {
        real_iv_.clear();
        cplx_iv_.clear();
        for (const auto& r : real_) real_iv_.push_back(Interval::from_endpoints(r.lo, r.hi, prec_));
        for (const auto& c : cplx_)
            cplx_iv_.push_back(ComplexInterval(
                Interval::from_endpoints(c.re - c.rad, c.re + c.rad, prec_),
                Interval::from_endpoints(c.im - c.rad, c.im + c.rad, prec_)));
    }

    void build_matrices() {
        size_t d = static_cast<size_t>(F_->degree());
        M_.assign(d, std::vector<Interval>(d, Interval::from_int(0, prec_)));
        for (size_t j = 0; j < d; ++j) {
            std::vector<Rat> col(d);
            for (size_t i = 0; i < d; ++i) col[i] = F_->basis_matrix()(i, j);
            auto iv = embed_coords(col);
            auto flat = iv.to_real_coords();
            for (size_t i = 0; i < d; ++i) M_[i][j] = flat[i];
        }
        Minv_ = detail::imat_inverse(M_);
    }

    // Certify s pairwise-disjoint positive-imaginary disks from approximate
    // centers; returns false if the certificate does not come together.
    bool certify_complex(std::vector<ComplexRootEnclosure>& out,
                         std::vector<std::pair<Rat, Rat>>& centers) const {
        const RatPoly& f = F_->poly();
        RatPoly fp = f.derivative();
        int d = F_->degree();
        out.clear();
        for (auto& [cre, cim] : centers) {
            auto [fr, fi] = f.eval_complex(cre, cim);
            auto [dr, di] = fp.eval_complex(cre, cim);
            Rat fn = fr * fr + fi * fi;
            Rat dn = dr * dr + di * di;
            if (dn == 0) return false;
            Rat rho = sqrt_upper(Rat(d * d) * fn / dn);
            if (cim - rho <= 0) return false;
            out.push_back({cre, cim, rho});
        }
        for (size_t i = 0; i < out.size(); ++i)
            for (size_t j = i + 1; j < out.size(); ++j) {
                Rat dx = out[i].re - out[j].re, dy = out[i].im - out[j].im;
                Rat rr = out[i].rad + out[j].rad;
                if (dx * dx + dy * dy <= rr * rr) return false;
            }
        return true;
    }

    static bool complex_less(const ComplexRootEnclosure& a, const ComplexRootEnclosure& b) {
        // Real part first; when the enclosures overlap, imaginary part; as a
        // last resort, exact center order. Correct whenever enclosures are
        // finer than the actual coordinate gaps.
        if (a.re + a.rad < b.re - b.rad) return true;
        if (b.re + b.rad < a.re - a.rad) return false;
        if (a.im + a.rad < b.im - b.rad) return true;
        if (b.im + b.rad < a.im - a.rad) return false;
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    }

public:
    const FieldPtr& field() const { return F_; }
    mpfr_prec_t precision() const { return prec_; }
    const std::vector<RealRootEnclosure>& real_roots() const { return real_; }
    const std::vector<ComplexRootEnclosure>& complex_roots() const { return cplx_; }
    const std::vector<Interval>& real_root_intervals() const { return real_iv_; }
    const std::vector<ComplexInterval>& complex_root_boxes() const { return cplx_iv_; }
    const detail::IMat& matrix() const { return M_; }
    const detail::IMat& matrix_inverse() const { return Minv_; }

    static EmbeddingSet isolate(FieldPtr F, mpfr_prec_t prec = kDefaultPrecision,
                                mpfr_prec_t cap = kPrecisionCap) {
        if (prec > cap) throw PrecisionExhausted("requested precision above cap");
        EmbeddingSet E(F, prec);
        const RatPoly& f = F->poly();
        int d = F->degree();

        if (d == 1) {
            Rat root = -f.coeff(0);
            E.real_.push_back({root, root});
            E.build_interval_forms();
            E.build_matrices();
            return E;
        }

        // Real roots: Sturm isolation on dyadic endpoints, then bisection.
        SturmSeq sturm(f);
        int r = F->real_places();
        if (r > 0) {
            Rat M = Rat(ceil_rat(f.cauchy_bound()));
            std::vector<std::pair<Rat, Rat>> stack{{-M, M}}, isolated;
            while (!stack.empty()) {
                auto [a, b] = stack.back();
                stack.pop_back();
                int cnt = sturm.count_in(a, b);
                if (cnt == 0) continue;
                if (cnt == 1) {
                    isolated.emplace_back(a, b);
                    continue;
                }
                Rat mid = (a + b) / 2;
                if (f.eval(mid) == 0) throw Error("rational root of irreducible polynomial");
                stack.emplace_back(a, mid);
                stack.emplace_back(mid, b);
            }
            std::sort(isolated.begin(), isolated.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            for (auto& [a, b] : isolated) {
                refine_real(f, a, b, prec);
                E.real_.push_back({a, b});
            }
            if (static_cast<int>(E.real_.size()) != r)
                throw Error("internal: real root count mismatch");
        }

        // Complex roots: Durand-Kerner seeds, Newton polish, exact disk
        // certificates, retry at doubled precision until they separate.
        int s = F->complex_places();
        if (s > 0) {
            auto seeds = detail::dk_roots(f);
            std::vector<std::complex<double>> upper;
            for (const auto& z : seeds)
                if (z.imag() > 0) upper.push_back(z);
            std::sort(upper.begin(), upper.end(),
                      [](const auto& a, const auto& b) { return a.imag() > b.imag(); });
            if (static_cast<int>(upper.size()) > s) upper.resize(s);
            std::vector<std::pair<Rat, Rat>> centers;
            for (const auto& z : upper) centers.emplace_back(Rat(z.real()), Rat(z.imag()));
            bool done = false;
            for (mpfr_prec_t wp = prec; wp <= cap && !done; wp *= 2) {
                auto cs = centers;
                for (auto& [cre, cim] : cs)
                    detail::newton_polish_complex(f, cre, cim, wp, 64);
                std::vector<ComplexRootEnclosure> out;
                if (static_cast<int>(cs.size()) == s && E.certify_complex(out, cs)) {
                    // Radii must also respect the requested precision.
                    Rat target(1);
                    mpz_mul_2exp(target.get_den_mpz_t(), target.get_den_mpz_t(), prec);
                    target.canonicalize();
                    bool tight = true;
                    for (const auto& c : out) {
                        Rat scale = std::max(std::max(abs_rat(c.re), abs_rat(c.im)), Rat(1));
                        if (c.rad > target * scale) tight = false;
                    }
                    if (tight) {
                        E.cplx_ = out;
                        done = true;
                    }
                }
            }
            if (!done) throw PrecisionExhausted("could not certify complex root isolation");
            // Insertion sort with the staged certified comparator; the disk
            // count is tiny and this avoids ordering assumptions std::sort
            // would bake in.
            for (size_t i = 1; i < E.cplx_.size(); ++i)
                for (size_t j = i; j > 0 && complex_less(E.cplx_[j], E.cplx_[j - 1]); --j)
                    std::swap(E.cplx_[j], E.cplx_[j - 1]);
        }

        E.build_interval_forms();
        E.build_matrices();
        return E;
    }

    // Higher-precision embedding set with nested enclosures.
    EmbeddingSet refined(mpfr_prec_t new_prec, mpfr_prec_t cap = kPrecisionCap) const {
        if (new_prec <= prec_) return *this;
        if (new_prec > cap) throw PrecisionExhausted("requested precision above cap");
        EmbeddingSet E(F_, new_prec);
        const RatPoly& f = F_->poly();
        for (auto r : real_) {
            refine_real(f, r.lo, r.hi, new_prec);
            E.real_.push_back(r);
        }
        if (!cplx_.empty()) {
            bool done = false;
            for (mpfr_prec_t wp = new_prec; wp <= cap && !done; wp *= 2) {
                std::vector<std::pair<Rat, Rat>> cs;
                for (const auto& c : cplx_) cs.emplace_back(c.re, c.im);
                for (auto& [cre, cim] : cs) detail::newton_polish_complex(f, cre, cim, wp, 64);
                std::vector<ComplexRootEnclosure> out;
                if (E.certify_complex(out, cs)) {
                    Rat target(1);
                    mpz_mul_2exp(target.get_den_mpz_t(), target.get_den_mpz_t(), new_prec);
                    target.canonicalize();
                    bool tight = true;
                    for (const auto& c : out) {
                        Rat scale = std::max(std::max(abs_rat(c.re), abs_rat(c.im)), Rat(1));
                        if (c.rad > target * scale) tight = false;
                    }
                    if (tight) {
                        E.cplx_ = out;
                        done = true;
                    }
                }
            }
            if (!done) throw PrecisionExhausted("could not refine complex roots");
        }
        E.build_interval_forms();
        // Force interval nesting against the coarser enclosure.
        for (size_t i = 0; i < E.real_iv_.size(); ++i)
            E.real_iv_[i] = E.real_iv_[i].intersect(real_iv_[i]);
        for (size_t i = 0; i < E.cplx_iv_.size(); ++i)
            E.cplx_iv_[i] = E.cplx_iv_[i].intersect(cplx_iv_[i]);
        E.build_matrices();
        return E;
    }

    IntervalVec embed_coords(const std::vector<Rat>& power_coords) const {
        RatPoly p{std::vector<Rat>(power_coords)};
        IntervalVec out;
        for (const auto& x : real_iv_) out.real.push_back(detail::eval_poly_iv(p, x, prec_));
        for (const auto& x : cplx_iv_) out.cplx.push_back(detail::eval_poly_iv(p, x, prec_));
        return out;
    }

    IntervalVec embed(const FieldElem& a) const {
        if (a.field().get() != F_.get()) throw MixedFields("embed: element of another field");
        return embed_coords(a.coords());
    }

    Interval house(const FieldElem& a) const { return embed(a).abs_max(); }

    // Interval solution of M c = y in the real-coordinate frame; c are
    // integral-basis coordinates.
    std::vector<Interval> solve_coords(const std::vector<Interval>& y) const {
        return detail::imat_apply(Minv_, y);
    }

    // Per-coordinate box bound: any x with house(x) <= T has integral-basis
    // coordinates bounded by these values.
    std::vector<Rat> coord_bounds_for_house(const Rat& T) const {
        std::vector<Rat> out;
        for (const auto& row : Minv_) {
            Interval acc = Interval::from_int(0, prec_);
            for (const auto& e : row) acc = acc + e.abs();
            out.push_back(T * acc.hi_q());
        }
        return out;
    }
};

// Candidate rational vector from enclosures via simplest-in-interval; null
// if some coordinate needs a denominator above max_den.
inline std::optional<std::vector<Rat>> rational_candidates(const std::vector<Interval>& v,
                                                           const Int& max_den) {
    std::vector<Rat> out;
    out.reserve(v.size());
    for (const auto& iv : v) {
        Rat cand = simplest_in_interval(iv.lo_q(), iv.hi_q());
        if (cand.get_den() > max_den) return std::nullopt;
        out.push_back(cand);
    }
    return out;
}

} // namespace badapprox
