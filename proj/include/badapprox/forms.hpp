#pragma once

#include "badapprox/algebraic.hpp"

namespace badapprox {

/// Q(x,y) = A x^2 + B xy + C y^2 over F.
struct QuadForm {
    FieldElem A, B, C;

    QuadForm(FieldElem a, FieldElem b, FieldElem c)
        : A(std::move(a)), B(std::move(b)), C(std::move(c)) {
        if (A.field().get() != B.field().get() || B.field().get() != C.field().get())
            throw MixedFields("form coefficients from different fields");
    }

    const FieldPtr& field() const { return A.field(); }

    // Delta(Q) = AC - B^2/4
    FieldElem discriminant() const { return A * C - B * B * make_rat(Int(1), Int(4)); }

    FieldElem evaluate(const FieldElem& x, const FieldElem& y) const {
        return A * x * x + B * x * y + C * y * y;
    }

    bool operator==(const QuadForm& o) const { return A == o.A && B == o.B && C == o.C; }
};

/// H(z,w) = A z zbar + conj(B) z wbar + B zbar w + C w wbar over a CM field;
/// A and C lie in the fixed subfield E.
struct HermForm {
    FieldElem A, B, C;
    CMStructure cm;

    HermForm(FieldElem a, FieldElem b, FieldElem c, CMStructure structure)
        : A(std::move(a)), B(std::move(b)), C(std::move(c)), cm(std::move(structure)) {
        if (A.field().get() != B.field().get() || B.field().get() != C.field().get() ||
            A.field().get() != cm.F.get())
            throw MixedFields("form coefficients from different fields");
        if (!cm.is_fixed(A) || !cm.is_fixed(C))
            throw Error("Hermitian diagonal coefficients must lie in the fixed subfield");
    }

    const FieldPtr& field() const { return A.field(); }

    // Delta = AC - B * tau(B), always tau-fixed.
    FieldElem discriminant() const {
        FieldElem d = A * C - B * cm.tau(B);
        if (!cm.is_fixed(d)) throw Error("internal: Hermitian discriminant not tau-fixed");
        return d;
    }

    FieldElem evaluate(const FieldElem& z, const FieldElem& w) const {
        FieldElem v = A * z * cm.tau(z) + cm.tau(B) * z * cm.tau(w) + B * cm.tau(z) * w +
                      C * w * cm.tau(w);
        if (!cm.is_fixed(v)) throw Error("internal: Hermitian value not tau-fixed");
        return v;
    }

    bool operator==(const HermForm& o) const { return A == o.A && B == o.B && C == o.C; }
};

/// Element of SL2 over the ring of integers (integral coordinates, det 1).
struct GroupElem {
    FieldElem a, b, c, d;

    GroupElem(FieldElem a_, FieldElem b_, FieldElem c_, FieldElem d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
        if (!(a * d - b * c == a.field()->one())) throw Error("group element must have det 1");
        if (!a.is_integral() || !b.is_integral() || !c.is_integral() || !d.is_integral())
            throw Error("group element must have integral entries");
    }

    static GroupElem identity(const FieldPtr& F) {
        return GroupElem(F->one(), F->zero(), F->zero(), F->one());
    }
};

// Q^g(x,y) = Q(ax+by, cx+dy).
inline QuadForm act(const GroupElem& g, const QuadForm& Q) {
    FieldElem A2 = Q.evaluate(g.a, g.c);
    FieldElem C2 = Q.evaluate(g.b, g.d);
    FieldElem B2 = Q.A * g.a * g.b * Rat(2) + Q.B * (g.a * g.d + g.b * g.c) +
                   Q.C * g.c * g.d * Rat(2);
    return QuadForm(std::move(A2), std::move(B2), std::move(C2));
}

// H^g(z,w) = H(az+bw, cz+dw); the new B slot is the zbar-w entry of
// conj(g)^t H g.
inline HermForm act(const GroupElem& g, const HermForm& H) {
    const auto& cm = H.cm;
    FieldElem A2 = H.evaluate(g.a, g.c);
    FieldElem C2 = H.evaluate(g.b, g.d);
    FieldElem B2 = H.A * cm.tau(g.a) * g.b + cm.tau(H.B) * cm.tau(g.c) * g.b +
                   H.B * cm.tau(g.a) * g.d + H.C * cm.tau(g.c) * g.d;
    return HermForm(std::move(A2), std::move(B2), std::move(C2), cm);
}

namespace detail {

// Certified sign of a real embedding value of a nonzero element: refines
// until the interval separates from zero (injectivity of the embeddings
// guarantees termination below the cap).
inline int certified_sign_real_place(const FieldElem& x, const EmbeddingSet& E, int place,
                                     mpfr_prec_t cap = kPrecisionCap) {
    if (x.is_zero()) return 0;
    EmbeddingSet cur = E;
    while (true) {
        Interval v = cur.embed(x).real[static_cast<size_t>(place)];
        if (v.sign() != 0) return v.sign();
        if (cur.precision() * 2 > cap)
            throw PrecisionExhausted("sign of real embedding undecidable");
        cur = cur.refined(cur.precision() * 2, cap);
    }
}

// Same for the real part at a complex place of a tau-fixed element (whose
// embedding values are real).
inline int certified_sign_complex_place(const FieldElem& x, const EmbeddingSet& E, int place,
                                        mpfr_prec_t cap = kPrecisionCap) {
    if (x.is_zero()) return 0;
    EmbeddingSet cur = E;
    while (true) {
        ComplexInterval v = cur.embed(x).cplx[static_cast<size_t>(place)];
        if (!v.im.contains_zero())
            throw Error("certified_sign_complex_place: value is not real at this place");
        if (v.re.sign() != 0) return v.re.sign();
        if (cur.precision() * 2 > cap)
            throw PrecisionExhausted("sign of embedding undecidable");
        cur = cur.refined(cur.precision() * 2, cap);
    }
}

} // namespace detail

/// sigma(Delta) < 0 at every real place (quadratic) or every place of the
/// fixed subfield (Hermitian). Exact zero is decided first, everything else
/// by interval refinement.
inline bool is_totally_indefinite(const QuadForm& Q, const EmbeddingSet& E) {
    FieldElem d = Q.discriminant();
    if (d.is_zero()) throw DegenerateForm("form has zero discriminant");
    for (int i = 0; i < Q.field()->real_places(); ++i)
        if (detail::certified_sign_real_place(d, E, i) >= 0) return false;
    return true;
}

inline bool is_totally_indefinite(const HermForm& H, const EmbeddingSet& E) {
    FieldElem d = H.discriminant();
    if (d.is_zero()) throw DegenerateForm("form has zero discriminant");
    for (int i = 0; i < H.field()->complex_places(); ++i)
        if (detail::certified_sign_complex_place(d, E, i) >= 0) return false;
    return true;
}

} // namespace badapprox
