#pragma once

#include <memory>
#include <optional>
#include <variant>

#include "badapprox/anisotropy.hpp"

namespace badapprox {

/// Exact real quadratic surd a + b*sqrt(D), D a nonnegative integer.
struct Surd {
    Rat a, b;
    Int D;

    Surd() : a(0), b(0), D(0) {}
    Surd(Rat a_, Rat b_, Int D_) : a(std::move(a_)), b(std::move(b_)), D(std::move(D_)) {
        if (D < 0) throw Error("surd radicand must be nonnegative");
        if (D == 0 || mpz_perfect_square_p(D.get_mpz_t())) {
            Int s;
            mpz_sqrt(s.get_mpz_t(), D.get_mpz_t());
            a += b * Rat(s);
            b = 0;
            D = 0;
        }
    }
    static Surd rational(const Rat& r) { return Surd(r, Rat(0), Int(0)); }

    bool is_rational() const { return b == 0; }

    Surd operator+(const Surd& o) const {
        if (!is_rational() && !o.is_rational() && D != o.D)
            throw Error("surds over different radicands");
        return Surd(a + o.a, b + o.b, is_rational() ? o.D : D);
    }
    Surd operator-() const { return Surd(-a, -b, D); }
    Surd operator*(const Surd& o) const {
        if (!is_rational() && !o.is_rational() && D != o.D)
            throw Error("surds over different radicands");
        Int rad = is_rational() ? o.D : D;
        return Surd(a * o.a + b * o.b * Rat(rad), a * o.b + b * o.a, rad);
    }
    Surd square() const { return *this * *this; }

    // Exact sign of a + b sqrt(D).
    int sign() const {
        if (b == 0) return a > 0 ? 1 : (a < 0 ? -1 : 0);
        if (a == 0) return b > 0 ? 1 : -1;
        if (a > 0 && b > 0) return 1;
        if (a < 0 && b < 0) return -1;
        // opposite signs: compare a^2 with b^2 D
        Rat lhs = a * a, rhs = b * b * Rat(D);
        if (lhs == rhs) return 0;
        bool a_wins = lhs > rhs;
        return (a > 0) == a_wins ? 1 : -1;
    }
    bool operator==(const Surd& o) const { return (*this + -o).sign() == 0; }

    Interval to_interval(mpfr_prec_t prec) const {
        Interval rad = Interval::from_rat(Rat(D), prec).sqrt();
        return Interval::from_rat(a, prec) + Interval::from_rat(b, prec) * rad;
    }

    std::string to_string() const {
        if (is_rational()) return badapprox::to_string(a);
        std::string s = badapprox::to_string(a);
        s += (b >= 0 ? "+" : "-") + badapprox::to_string(abs_rat(b)) + "*sqrt(" + D.get_str() + ")";
        return s;
    }
};

// "a", "a/b", "sqrt(D)", "a+b*sqrt(D)" with rational a, b.
inline Surd parse_surd(const std::string& s) {
    auto sq = s.find("sqrt(");
    if (sq == std::string::npos) return Surd::rational(parse_rational(s));
    auto close = s.find(')', sq);
    if (close == std::string::npos) throw ParseError("unterminated sqrt in surd: " + s);
    Int D;
    if (mpz_set_str(D.get_mpz_t(), s.substr(sq + 5, close - sq - 5).c_str(), 10) != 0)
        throw ParseError("bad radicand in surd: " + s);
    std::string head = s.substr(0, sq); // "", "-", "a+", "a-", "a+b*", "a-b*"
    Rat a(0), b(1);
    if (!head.empty() && head.back() == '*') head.pop_back();
    // split head at the last top-level +/- that separates a from b
    size_t split = std::string::npos;
    for (size_t i = head.size(); i-- > 1;) {
        if ((head[i] == '+' || head[i] == '-') && head[i - 1] != '/' && head[i - 1] != '+' &&
            head[i - 1] != '-') {
            split = i;
            break;
        }
    }
    if (head.empty()) {
        // sqrt(D)
    } else if (split == std::string::npos) {
        if (head == "-")
            b = -1;
        else if (head == "+")
            b = 1;
        else
            b = parse_rational(head); // b*sqrt(D)
    } else {
        a = parse_rational(head.substr(0, split));
        std::string bs = head.substr(split);
        if (bs == "+") b = 1;
        else if (bs == "-") b = -1;
        else b = parse_rational(bs);
    }
    return Surd(a, b, D);
}

/// Point on the unit circle: exact via alpha in [-2,2] (u = (alpha +- i
/// sqrt(4-alpha^2))/2) or an angle for exploratory scans only.
struct UnitCirclePoint {
    bool exact = true;
    Surd alpha;   // exact form
    int sign = 1; // which of the two conjugate points
    Rat angle;    // non-certified form, radians as a rational

    static UnitCirclePoint from_alpha(Surd a, int s) {
        Surd bound = Surd::rational(Rat(4)) + -(a.square());
        if (bound.sign() < 0) throw Error("alpha must satisfy |alpha| <= 2");
        UnitCirclePoint u;
        u.exact = true;
        u.alpha = std::move(a);
        u.sign = s >= 0 ? 1 : -1;
        return u;
    }
    static UnitCirclePoint from_angle(Rat t) {
        UnitCirclePoint u;
        u.exact = false;
        u.angle = std::move(t);
        return u;
    }

    ComplexInterval to_interval(mpfr_prec_t prec) const {
        if (exact) {
            Surd rad2 = Surd::rational(Rat(4)) + -(alpha.square());
            Interval re =
                alpha.to_interval(prec) * Interval::from_rat(make_rat(Int(1), Int(2)), prec);
            Interval im = rad2.to_interval(prec).sqrt_clamped() *
                          Interval::from_rat(make_rat(Int(sign), Int(2)), prec);
            return {re, im};
        }
        // cos/sin at the exact rational angle, padded by a rounding bound;
        // both are 1-Lipschitz so a crude pad is sound.
        mpfr_t m, cv, sv;
        mpfr_init2(m, prec + 32);
        mpfr_init2(cv, prec + 32);
        mpfr_init2(sv, prec + 32);
        mpfr_set_q(m, angle.get_mpq_t(), MPFR_RNDN);
        mpfr_cos(cv, m, MPFR_RNDN);
        mpfr_sin(sv, m, MPFR_RNDN);
        Rat cq, sq;
        mpfr_get_q(cq.get_mpq_t(), cv);
        mpfr_get_q(sq.get_mpq_t(), sv);
        mpfr_clears(m, cv, sv, static_cast<mpfr_ptr>(nullptr));
        Rat err(1);
        mpz_mul_2exp(err.get_den_mpz_t(), err.get_den_mpz_t(),
                     static_cast<unsigned long>(prec + 16));
        err.canonicalize();
        err += abs_rat(angle) * err; // covers the m-rounding step too
        return {Interval::from_endpoints(cq - err, cq + err, prec),
                Interval::from_endpoints(sq - err, sq + err, prec)};
    }
};

/// Where a target vector came from; enough data to recompute it exactly at
/// any precision.
struct QuadZeroProvenance {
    QuadForm form;
    std::vector<int> signs; // +-1 per place
};
struct HermCircleProvenance {
    HermForm form;
    std::vector<UnitCirclePoint> params;
};
struct CorollaryProvenance {
    HermForm form; // (z - f w)(conj) - e |w|^2, built internally
    FieldElem shift_f, e;
    std::vector<Surd> alphas;
    std::vector<int> signs;
};
struct ExternalProvenance {
    std::vector<Rat> real_values;
    std::vector<std::pair<Rat, Rat>> complex_values;
};

using Provenance =
    std::variant<QuadZeroProvenance, HermCircleProvenance, CorollaryProvenance, ExternalProvenance>;

/// A point of R^r x C^s with certified enclosures, recomputable on demand.
class TargetVector {
    FieldPtr F_;
    std::shared_ptr<const Provenance> prov_;
    bool exact_ = true; // certified badly-approximable claim applies
    mpfr_prec_t prec_;
    IntervalVec comps_;

    static IntervalVec compute(const FieldPtr& F, const Provenance& prov, mpfr_prec_t prec,
                               const EmbeddingSet& E);

public:
    TargetVector(FieldPtr F, Provenance prov, bool exact, const EmbeddingSet& E,
                 mpfr_prec_t prec)
        : F_(std::move(F)),
          prov_(std::make_shared<const Provenance>(std::move(prov))),
          exact_(exact),
          prec_(prec),
          comps_(compute(F_, *prov_, prec, E)) {}

    const FieldPtr& field() const { return F_; }
    const Provenance& provenance() const { return *prov_; }
    bool exact_provenance() const { return exact_; }
    mpfr_prec_t precision() const { return prec_; }
    const IntervalVec& components() const { return comps_; }

    TargetVector at_precision(mpfr_prec_t prec, const EmbeddingSet& E) const {
        TargetVector v = *this;
        v.prec_ = prec;
        v.comps_ = compute(F_, *prov_, prec, E);
        return v;
    }
    TargetVector refined(const EmbeddingSet& E) const { return at_precision(prec_ * 2, E); }

    bool is_rational_point() const {
        return std::holds_alternative<ExternalProvenance>(*prov_);
    }
    // For exact rational targets: the values themselves.
    const ExternalProvenance* external() const {
        return std::get_if<ExternalProvenance>(prov_.get());
    }
};

inline IntervalVec TargetVector::compute(const FieldPtr& F, const Provenance& prov,
                                         mpfr_prec_t prec, const EmbeddingSet& E_in) {
    EmbeddingSet E = E_in.precision() >= prec ? E_in : E_in.refined(prec);
    IntervalVec out;
    if (const auto* q = std::get_if<QuadZeroProvenance>(&prov)) {
        const auto& Q = q->form;
        auto Av = E.embed(Q.A), Bv = E.embed(Q.B), Cv = E.embed(Q.C);
        // disc4 = B^2 - 4AC = -4 Delta
        FieldElem disc4 = Q.B * Q.B - Q.A * Q.C * Rat(4);
        auto Dv = E.embed(disc4);
        int r = F->real_places(), s = F->complex_places();
        bool a_zero = Q.A.is_zero();
        for (int i = 0; i < r; ++i) {
            if (a_zero) {
                out.real.push_back(-Cv.real[static_cast<size_t>(i)] /
                                   Bv.real[static_cast<size_t>(i)]);
                continue;
            }
            Interval sq = Dv.real[static_cast<size_t>(i)].sqrt_clamped();
            Interval num = q->signs[static_cast<size_t>(i)] > 0
                               ? -Bv.real[static_cast<size_t>(i)] + sq
                               : -Bv.real[static_cast<size_t>(i)] - sq;
            out.real.push_back(num / (Av.real[static_cast<size_t>(i)] *
                                      Interval::from_int(2, prec)));
        }
        for (int i = 0; i < s; ++i) {
            const auto& box = Dv.cplx[static_cast<size_t>(i)];
            if (a_zero) {
                // finite zero -C/B, complex interval division via conjugate
                const auto& b = Bv.cplx[static_cast<size_t>(i)];
                const auto& c = Cv.cplx[static_cast<size_t>(i)];
                ComplexInterval num = -(c * b.conj());
                Interval den = b.abs_sq();
                out.cplx.push_back(ComplexInterval(num.re / den, num.im / den));
                continue;
            }
            Rat wr, wi;
            detail::approx_sqrt_dyadic(box, wr, wi, prec);
            auto sb = detail::certified_sqrt_box(box, wr, wi, prec);
            if (!sb) throw PrecisionExhausted("square root box did not certify");
            ComplexInterval sq = q->signs[static_cast<size_t>(r + i)] > 0 ? *sb : -*sb;
            const auto& b = Bv.cplx[static_cast<size_t>(i)];
            const auto& a2 = Av.cplx[static_cast<size_t>(i)];
            ComplexInterval num = (-b) + sq;
            ComplexInterval den = a2 * ComplexInterval::from_rat(Rat(2), Rat(0), prec);
            ComplexInterval prod = num * den.conj();
            Interval dn = den.abs_sq();
            out.cplx.push_back(ComplexInterval(prod.re / dn, prod.im / dn));
        }
        return out;
    }
    if (const auto* h = std::get_if<HermCircleProvenance>(&prov)) {
        const auto& H = h->form;
        FieldElem center = -(H.B / H.A); // exact element of F
        FieldElem negdelta = -H.discriminant();
        auto cv = E.embed(center);
        auto dv = E.embed(negdelta);
        auto av = E.embed(H.A);
        int s = F->complex_places();
        for (int i = 0; i < s; ++i) {
            // radius = sqrt(-Delta_i) / |A_i|; both are real at this place
            Interval nd = dv.cplx[static_cast<size_t>(i)].re;
            Interval radius = nd.sqrt_clamped() / av.cplx[static_cast<size_t>(i)].re.abs();
            ComplexInterval u = h->params[static_cast<size_t>(i)].to_interval(prec);
            out.cplx.push_back(cv.cplx[static_cast<size_t>(i)] + u * radius);
        }
        return out;
    }
    if (const auto* c = std::get_if<CorollaryProvenance>(&prov)) {
        auto fv = E.embed(c->shift_f);
        auto ev = E.embed(c->e);
        int s = F->complex_places();
        for (int i = 0; i < s; ++i) {
            Interval sqrt_e = ev.cplx[static_cast<size_t>(i)].re.sqrt_clamped();
            auto u = UnitCirclePoint::from_alpha(c->alphas[static_cast<size_t>(i)],
                                                 c->signs[static_cast<size_t>(i)])
                         .to_interval(prec);
            out.cplx.push_back(fv.cplx[static_cast<size_t>(i)] + u * sqrt_e);
        }
        return out;
    }
    const auto& ext = std::get<ExternalProvenance>(prov);
    for (const auto& v : ext.real_values) out.real.push_back(Interval::from_rat(v, prec));
    for (const auto& [re, im] : ext.complex_values)
        out.cplx.push_back(ComplexInterval::from_rat(re, im, prec));
    return out;
}

/// Zero vector of a totally indefinite quadratic form, one sign per place.
inline TargetVector quad_zeros(const QuadForm& Q, const EmbeddingSet& E,
                               const std::vector<int>& signs,
                               mpfr_prec_t prec = kDefaultPrecision) {
    const auto& F = Q.field();
    if (Q.discriminant().is_zero()) throw DegenerateForm("form has zero discriminant");
    if (!is_totally_indefinite(Q, E))
        throw Error("quad_zeros requires a totally indefinite form");
    if (static_cast<int>(signs.size()) != F->num_places())
        throw Error("one sign per place required");
    if (Q.A.is_zero() && Q.B.is_zero()) throw DegenerateForm("degenerate zero set");
    return TargetVector(F, QuadZeroProvenance{Q, signs}, true, E, prec);
}

/// Point of the zero torus of a totally indefinite Hermitian form.
inline TargetVector herm_circle(const HermForm& H, const EmbeddingSet& E,
                                const std::vector<UnitCirclePoint>& params,
                                mpfr_prec_t prec = kDefaultPrecision) {
    const auto& F = H.field();
    if (H.discriminant().is_zero()) throw DegenerateForm("form has zero discriminant");
    if (H.A.is_zero()) throw LineNotCircle("zero set is a line, not a circle");
    if (!is_totally_indefinite(H, E))
        throw Error("herm_circle requires a totally indefinite form");
    if (static_cast<int>(params.size()) != F->complex_places())
        throw Error("one circle parameter per place required");
    bool exact = true;
    for (const auto& u : params)
        if (!u.exact) exact = false;
    return TargetVector(F, HermCircleProvenance{H, params}, exact, E, prec);
}

/// The algebraic family z_i = f_i + sqrt(e_i) (alpha_i +- i sqrt(4-alpha_i^2))/2
/// for totally positive non-norm e; certified badly approximable.
inline TargetVector corollary_vector(const FieldElem& f, const FieldElem& e,
                                     const std::vector<Surd>& alphas,
                                     const std::vector<int>& signs, const CMStructure& cm,
                                     const EmbeddingSet& E,
                                     mpfr_prec_t prec = kDefaultPrecision) {
    const auto& F = cm.F;
    if (f.field().get() != F.get() || e.field().get() != F.get())
        throw MixedFields("corollary data from another field");
    if (!cm.is_fixed(e)) throw Error("e must lie in the fixed subfield");
    int s = F->complex_places();
    if (static_cast<int>(alphas.size()) != s || static_cast<int>(signs.size()) != s)
        throw Error("one alpha and one sign per place required");
    for (const auto& a : alphas) {
        Surd bound = Surd::rational(Rat(4)) + -(a.square());
        if (bound.sign() < 0) throw Error("alpha must satisfy |alpha| <= 2");
    }
    for (int i = 0; i < s; ++i)
        if (detail::certified_sign_complex_place(e, E, i) <= 0)
            throw NotTotallyPositive("e must be totally positive");
    // e must not be a relative norm, certified through the form z zbar - e w wbar.
    HermForm probe(F->one(), F->zero(), -e, cm);
    auto verdict = is_anisotropic_herm(probe, E);
    if (!verdict.anisotropic())
        throw NormObstructionMissing(
            verdict.isotropic() ? "e is a relative norm; the vector is not certified"
                                : "norm obstruction undecided; the vector is not certified");
    // The vector lies on Z(H_f) for H_f(z,w) = (z - f w)(zbar - tau(f) wbar) - e w wbar.
    HermForm Hf(F->one(), -f, relative_norm(f, cm) - e, cm);
    return TargetVector(F, CorollaryProvenance{Hf, f, e, alphas, signs}, true, E, prec);
}

/// Exact rational target (used for calibration targets over Q and for
/// externally supplied points).
inline TargetVector external_vector(const FieldPtr& F, std::vector<Rat> real_values,
                                    std::vector<std::pair<Rat, Rat>> complex_values,
                                    const EmbeddingSet& E,
                                    mpfr_prec_t prec = kDefaultPrecision) {
    if (static_cast<int>(real_values.size()) != F->real_places() ||
        static_cast<int>(complex_values.size()) != F->complex_places())
        throw Error("component count must match the signature");
    return TargetVector(F, ExternalProvenance{std::move(real_values), std::move(complex_values)},
                        false, E, prec);
}

/// The form a vector with form provenance vanishes on, if any.
inline std::optional<std::variant<QuadForm, HermForm>> provenance_form(const TargetVector& z) {
    if (const auto* q = std::get_if<QuadZeroProvenance>(&z.provenance())) return q->form;
    if (const auto* h = std::get_if<HermCircleProvenance>(&z.provenance())) return h->form;
    if (const auto* c = std::get_if<CorollaryProvenance>(&z.provenance())) return c->form;
    return std::nullopt;
}

/// Per-place enclosures of J(z_i, 1). For vectors on Z(J) every component
/// must contain zero, and widths shrink under refinement.
inline std::vector<ComplexInterval> form_values_at(const std::variant<QuadForm, HermForm>& J,
                                                   const IntervalVec& z, const EmbeddingSet& E) {
    std::vector<ComplexInterval> out;
    mpfr_prec_t prec = E.precision();
    Interval zero = Interval::from_int(0, prec);
    if (const auto* Q = std::get_if<QuadForm>(&J)) {
        auto Av = E.embed(Q->A), Bv = E.embed(Q->B), Cv = E.embed(Q->C);
        for (size_t i = 0; i < z.real.size(); ++i) {
            const auto& v = z.real[i];
            out.emplace_back(Av.real[i] * v.square() + Bv.real[i] * v + Cv.real[i], zero);
        }
        for (size_t i = 0; i < z.cplx.size(); ++i) {
            const auto& v = z.cplx[i];
            ComplexInterval val = Av.cplx[i] * v * v + Bv.cplx[i] * v + Cv.cplx[i];
            out.push_back(val);
        }
        return out;
    }
    const auto& H = std::get<HermForm>(J);
    auto Av = E.embed(H.A), Bv = E.embed(H.B), Cv = E.embed(H.C);
    for (size_t i = 0; i < z.cplx.size(); ++i) {
        const auto& v = z.cplx[i];
        // A|z|^2 + 2 Re(B zbar) + C, real because A, C and the pairing are
        ComplexInterval bzbar = Bv.cplx[i] * v.conj();
        Interval val = Av.cplx[i].re * v.abs_sq() + bzbar.re * Interval::from_int(2, prec) +
                       Cv.cplx[i].re;
        out.emplace_back(val, zero);
    }
    return out;
}

} // namespace badapprox
