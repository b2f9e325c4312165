#pragma once

#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

#include "badapprox/rational.hpp"

namespace badapprox {

/// Closed real interval [lo, hi] with MPFR endpoints and outward rounding.
/// Every operation returns an enclosure of the exact image; precision of a
/// result is the maximum of the operand precisions.
class Interval {
    mpfr_t lo_, hi_;

    void init(mpfr_prec_t p) {
        mpfr_init2(lo_, p);
        mpfr_init2(hi_, p);
    }

public:
    explicit Interval(mpfr_prec_t prec = 64) {
        init(prec);
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
    }
    Interval(const Interval& o) {
        init(mpfr_get_prec(o.lo_));
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    Interval(Interval&& o) noexcept {
        lo_[0] = o.lo_[0];
        hi_[0] = o.hi_[0];
        mpfr_init2(o.lo_, MPFR_PREC_MIN);
        mpfr_init2(o.hi_, MPFR_PREC_MIN);
        mpfr_set_zero(o.lo_, 1);
        mpfr_set_zero(o.hi_, 1);
    }
    Interval& operator=(Interval o) noexcept {
        std::swap(lo_[0], o.lo_[0]);
        std::swap(hi_[0], o.hi_[0]);
        return *this;
    }
    ~Interval() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    mpfr_prec_t prec() const { return std::max(mpfr_get_prec(lo_), mpfr_get_prec(hi_)); }
    mpfr_srcptr lo() const { return lo_; }
    mpfr_srcptr hi() const { return hi_; }

    static Interval from_rat(const Rat& r, mpfr_prec_t prec) {
        Interval x(prec);
        mpfr_set_q(x.lo_, r.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(x.hi_, r.get_mpq_t(), MPFR_RNDU);
        return x;
    }
    static Interval from_int(long v, mpfr_prec_t prec) {
        Interval x(prec);
        mpfr_set_si(x.lo_, v, MPFR_RNDD);
        mpfr_set_si(x.hi_, v, MPFR_RNDU);
        return x;
    }
    static Interval from_endpoints(const Rat& lo, const Rat& hi, mpfr_prec_t prec) {
        if (lo > hi) throw Error("interval endpoints out of order");
        Interval x(prec);
        mpfr_set_q(x.lo_, lo.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(x.hi_, hi.get_mpq_t(), MPFR_RNDU);
        return x;
    }

    // Exact dyadic endpoints.
    Rat lo_q() const {
        Rat r;
        mpfr_get_q(r.get_mpq_t(), lo_);
        return r;
    }
    Rat hi_q() const {
        Rat r;
        mpfr_get_q(r.get_mpq_t(), hi_);
        return r;
    }
    double lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    double mid_d() const { return 0.5 * (lo_d() + hi_d()); }
    Rat mid_q() const { return (lo_q() + hi_q()) / 2; }

    double width_d() const {
        mpfr_t w;
        mpfr_init2(w, 64);
        mpfr_sub(w, hi_, lo_, MPFR_RNDU);
        double d = mpfr_get_d(w, MPFR_RNDU);
        mpfr_clear(w);
        return d;
    }

    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
    bool contains(const Rat& r) const {
        return mpfr_cmp_q(lo_, r.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, r.get_mpq_t()) >= 0;
    }
    bool subset_of(const Interval& o) const {
        return mpfr_cmp(o.lo_, lo_) <= 0 && mpfr_cmp(hi_, o.hi_) <= 0;
    }
    // Certified sign: +1 if lo > 0, -1 if hi < 0, 0 if the interval straddles.
    int sign() const {
        if (mpfr_sgn(lo_) > 0) return 1;
        if (mpfr_sgn(hi_) < 0) return -1;
        return 0;
    }
    bool certainly_lt(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }
    bool certainly_gt(const Interval& o) const { return o.certainly_lt(*this); }
    bool certainly_le_q(const Rat& r) const { return mpfr_cmp_q(hi_, r.get_mpq_t()) <= 0; }
    bool certainly_ge_q(const Rat& r) const { return mpfr_cmp_q(lo_, r.get_mpq_t()) >= 0; }
    bool certainly_gt_q(const Rat& r) const { return mpfr_cmp_q(lo_, r.get_mpq_t()) > 0; }
    bool certainly_lt_q(const Rat& r) const { return mpfr_cmp_q(hi_, r.get_mpq_t()) < 0; }

    Interval operator+(const Interval& o) const {
        Interval r(std::max(prec(), o.prec()));
        mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
        return r;
    }
    Interval operator-(const Interval& o) const {
        Interval r(std::max(prec(), o.prec()));
        mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
        return r;
    }
    Interval operator-() const {
        Interval r(prec());
        mpfr_neg(r.lo_, hi_, MPFR_RNDD);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
        return r;
    }

    Interval operator*(const Interval& o) const {
        Interval r(std::max(prec(), o.prec()));
        // Sign-cased endpoint selection; falls back to min/max of products.
        int sa = mpfr_sgn(lo_) >= 0 ? 1 : (mpfr_sgn(hi_) <= 0 ? -1 : 0);
        int sb = mpfr_sgn(o.lo_) >= 0 ? 1 : (mpfr_sgn(o.hi_) <= 0 ? -1 : 0);
        if (sa == 1 && sb == 1) {
            mpfr_mul(r.lo_, lo_, o.lo_, MPFR_RNDD);
            mpfr_mul(r.hi_, hi_, o.hi_, MPFR_RNDU);
        } else if (sa == 1 && sb == -1) {
            mpfr_mul(r.lo_, hi_, o.lo_, MPFR_RNDD);
            mpfr_mul(r.hi_, lo_, o.hi_, MPFR_RNDU);
        } else if (sa == -1 && sb == 1) {
            mpfr_mul(r.lo_, lo_, o.hi_, MPFR_RNDD);
            mpfr_mul(r.hi_, hi_, o.lo_, MPFR_RNDU);
        } else if (sa == -1 && sb == -1) {
            mpfr_mul(r.lo_, hi_, o.hi_, MPFR_RNDD);
            mpfr_mul(r.hi_, lo_, o.lo_, MPFR_RNDU);
        } else {
            mpfr_t t;
            mpfr_init2(t, r.prec());
            mpfr_mul(r.lo_, lo_, o.lo_, MPFR_RNDD);
            mpfr_mul(t, lo_, o.hi_, MPFR_RNDD);
            mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, hi_, o.lo_, MPFR_RNDD);
            mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, hi_, o.hi_, MPFR_RNDD);
            mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
            mpfr_mul(r.hi_, lo_, o.lo_, MPFR_RNDU);
            mpfr_mul(t, lo_, o.hi_, MPFR_RNDU);
            mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
            mpfr_mul(t, hi_, o.lo_, MPFR_RNDU);
            mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
            mpfr_mul(t, hi_, o.hi_, MPFR_RNDU);
            mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
            mpfr_clear(t);
        }
        return r;
    }

    Interval operator/(const Interval& o) const {
        if (o.contains_zero()) throw Error("interval division by interval containing zero");
        Interval inv(o.prec());
        mpfr_ui_div(inv.lo_, 1, o.hi_, MPFR_RNDD);
        mpfr_ui_div(inv.hi_, 1, o.lo_, MPFR_RNDU);
        return *this * inv;
    }

    Interval square() const {
        Interval r(prec());
        if (contains_zero()) {
            mpfr_set_zero(r.lo_, 1);
            mpfr_t a, b;
            mpfr_init2(a, prec());
            mpfr_init2(b, prec());
            mpfr_mul(a, lo_, lo_, MPFR_RNDU);
            mpfr_mul(b, hi_, hi_, MPFR_RNDU);
            mpfr_max(r.hi_, a, b, MPFR_RNDU);
            mpfr_clear(a);
            mpfr_clear(b);
            return r;
        }
        return *this * *this;
    }

    Interval abs() const {
        Interval r(prec());
        if (mpfr_sgn(lo_) >= 0) return *this;
        if (mpfr_sgn(hi_) <= 0) return -*this;
        mpfr_set_zero(r.lo_, 1);
        mpfr_t t;
        mpfr_init2(t, prec());
        mpfr_neg(t, lo_, MPFR_RNDU);
        mpfr_max(r.hi_, t, hi_, MPFR_RNDU);
        mpfr_clear(t);
        return r;
    }

    // Requires lo >= 0.
    Interval sqrt() const {
        if (mpfr_sgn(lo_) < 0) throw Error("interval sqrt of possibly-negative value");
        Interval r(prec());
        mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
        mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
        return r;
    }
    // For enclosures of values known to be >= 0 whose lower endpoint dips
    // below zero by rounding.
    Interval sqrt_clamped() const {
        if (mpfr_sgn(hi_) < 0) throw Error("sqrt_clamped of certainly-negative value");
        Interval x = *this;
        if (mpfr_sgn(x.lo_) < 0) mpfr_set_zero(x.lo_, 1);
        return x.sqrt();
    }

    Interval exp() const {
        Interval r(prec());
        mpfr_exp(r.lo_, lo_, MPFR_RNDD);
        mpfr_exp(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    Interval log() const {
        if (mpfr_sgn(lo_) <= 0) throw Error("interval log of possibly-nonpositive value");
        Interval r(prec());
        mpfr_log(r.lo_, lo_, MPFR_RNDD);
        mpfr_log(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    Interval max_with(const Interval& o) const {
        Interval r(std::max(prec(), o.prec()));
        mpfr_max(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_max(r.hi_, hi_, o.hi_, MPFR_RNDU);
        return r;
    }
    Interval min_with(const Interval& o) const {
        Interval r(std::max(prec(), o.prec()));
        mpfr_min(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_min(r.hi_, hi_, o.hi_, MPFR_RNDU);
        return r;
    }

    Interval intersect(const Interval& o) const {
        Interval r(std::max(prec(), o.prec()));
        mpfr_max(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_min(r.hi_, hi_, o.hi_, MPFR_RNDU);
        if (mpfr_cmp(r.lo_, r.hi_) > 0) throw Error("empty interval intersection");
        return r;
    }

    Interval widened(const Rat& eps) const {
        Interval e = Interval::from_rat(eps, prec());
        Interval r(prec());
        mpfr_sub(r.lo_, lo_, e.hi_, MPFR_RNDD);
        mpfr_add(r.hi_, hi_, e.hi_, MPFR_RNDU);
        return r;
    }

    // "lo..hi" decimal enclosure, endpoints rounded outward.
    std::string to_string(int digits = 17) const {
        char* ls = nullptr;
        char* hs = nullptr;
        mpfr_asprintf(&ls, "%.*Re", digits, lo_);
        mpfr_asprintf(&hs, "%.*Re", digits, hi_);
        std::string out = std::string(ls) + " .. " + std::string(hs);
        mpfr_free_str(ls);
        mpfr_free_str(hs);
        return out;
    }
};

/// Rectangular complex enclosure (separate real and imaginary intervals).
class ComplexInterval {
public:
    Interval re, im;

    ComplexInterval() = default;
    ComplexInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
    static ComplexInterval from_rat(const Rat& r, const Rat& i, mpfr_prec_t prec) {
        return {Interval::from_rat(r, prec), Interval::from_rat(i, prec)};
    }

    mpfr_prec_t prec() const { return std::max(re.prec(), im.prec()); }

    ComplexInterval operator+(const ComplexInterval& o) const { return {re + o.re, im + o.im}; }
    ComplexInterval operator-(const ComplexInterval& o) const { return {re - o.re, im - o.im}; }
    ComplexInterval operator-() const { return {-re, -im}; }
    ComplexInterval operator*(const ComplexInterval& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    ComplexInterval operator*(const Interval& s) const { return {re * s, im * s}; }
    ComplexInterval conj() const { return {re, -im}; }

    Interval abs_sq() const { return re.square() + im.square(); }
    Interval abs() const { return abs_sq().sqrt_clamped(); }

    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
    bool contains(const Rat& r, const Rat& i) const { return re.contains(r) && im.contains(i); }
    bool subset_of(const ComplexInterval& o) const {
        return re.subset_of(o.re) && im.subset_of(o.im);
    }
    ComplexInterval intersect(const ComplexInterval& o) const {
        return {re.intersect(o.re), im.intersect(o.im)};
    }

    std::string to_string(int digits = 17) const {
        return "(" + re.to_string(digits) + ") + (" + im.to_string(digits) + ")*i";
    }
};

} // namespace badapprox
