#include <catch2/catch_amalgamated.hpp>

#include "badapprox/vectors.hpp"

using namespace badapprox;

namespace {

RatPoly poly(std::initializer_list<long> asc) {
    std::vector<Rat> c;
    for (long v : asc) c.emplace_back(v);
    return RatPoly(std::move(c));
}

Rat dec(const char* s) { return parse_rational(s); }

} // namespace

TEST_CASE("surd arithmetic and parsing") {
    Surd phi = parse_surd("1/2+1/2*sqrt(5)");
    REQUIRE(phi.square() == phi + Surd::rational(Rat(1))); // phi^2 = phi + 1
    REQUIRE(parse_surd("sqrt(4)").is_rational());
    REQUIRE(parse_surd("sqrt(4)") == Surd::rational(Rat(2)));
    REQUIRE(parse_surd("-sqrt(2)").sign() == -1);
    REQUIRE(parse_surd("3/2").is_rational());
    REQUIRE(parse_surd("1-sqrt(2)").sign() == -1);
    REQUIRE(parse_surd("2-sqrt(2)").sign() == 1);
    auto iv = phi.to_interval(128);
    REQUIRE(iv.certainly_gt_q(dec("1.6180339887498948")));
    REQUIRE(iv.certainly_lt_q(dec("1.6180339887498949")));
}

TEST_CASE("golden ratio as a quadratic zero over Q") {
    auto Q = NumberField::create(poly({0, 1}));
    auto E = EmbeddingSet::isolate(Q, 128);
    QuadForm fib(Q->one(), -Q->one(), -Q->one());
    auto z = quad_zeros(fib, E, {+1});
    const auto& v = z.components().real[0];
    REQUIRE(v.certainly_gt_q(dec("1.618033988749894")));
    REQUIRE(v.certainly_lt_q(dec("1.618033988749895")));
    auto zm = quad_zeros(fib, E, {-1});
    REQUIRE(zm.components().real[0].certainly_lt_q(Rat(0)));
}

TEST_CASE("zeros of x^2-3y^2 over Q(sqrt 2)") {
    auto F = NumberField::create(poly({-2, 0, 1}));
    auto E = EmbeddingSet::isolate(F, 128);
    QuadForm Q(F->one(), F->zero(), F->from_rat(Rat(-3)));

    auto zpp = quad_zeros(Q, E, {+1, +1});
    for (const auto& c : zpp.components().real) {
        REQUIRE(c.certainly_gt_q(dec("1.7320508075688")));
        REQUIRE(c.certainly_lt_q(dec("1.7320508075689")));
    }
    auto zpm = quad_zeros(Q, E, {+1, -1});
    REQUIRE(zpm.components().real[0].certainly_gt_q(Rat(0)));
    REQUIRE(zpm.components().real[1].certainly_lt_q(Rat(0)));

    // all four sign patterns give pairwise separated vectors
    std::vector<TargetVector> all;
    for (int s0 : {+1, -1})
        for (int s1 : {+1, -1}) all.push_back(quad_zeros(Q, E, {s0, s1}));
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i + 1; j < all.size(); ++j) {
            bool separated = false;
            for (size_t k = 0; k < 2; ++k) {
                const auto& a = all[i].components().real[k];
                const auto& b = all[j].components().real[k];
                if (a.certainly_lt(b) || b.certainly_lt(a)) separated = true;
            }
            REQUIRE(separated);
        }
}

TEST_CASE("membership: form vanishes on its zero vectors") {
    auto F = NumberField::create(poly({-2, 0, 1}));
    auto E = EmbeddingSet::isolate(F, 128);
    QuadForm Q(F->one(), F->theta(), F->from_rat(Rat(-3)));
    REQUIRE(is_totally_indefinite(Q, E));
    auto z = quad_zeros(Q, E, {+1, -1});
    auto res = form_values_at(Q, z.components(), E);
    double width_before = 0;
    for (const auto& v : res) {
        REQUIRE(v.contains_zero());
        width_before = std::max(width_before, v.re.width_d());
    }
    // refinement shrinks the residual enclosures
    auto E2 = E.refined(512);
    auto z2 = z.at_precision(512, E2);
    auto res2 = form_values_at(Q, z2.components(), E2);
    for (size_t i = 0; i < res2.size(); ++i) {
        REQUIRE(res2[i].contains_zero());
        REQUIRE(res2[i].re.width_d() < width_before);
    }
}

TEST_CASE("hermitian circle points over Q(i)") {
    auto Fi = NumberField::create(poly({1, 0, 1}));
    auto E = EmbeddingSet::isolate(Fi, 128);
    auto cm = cm_structure(Fi, E);
    HermForm H(Fi->one(), Fi->zero(), Fi->from_rat(Rat(-3)), cm);

    // u = 1 (alpha = 2): z = sqrt(3)
    auto z1 = herm_circle(H, E, {UnitCirclePoint::from_alpha(Surd::rational(Rat(2)), +1)});
    REQUIRE(z1.components().cplx[0].re.certainly_gt_q(dec("1.73205080756887")));
    REQUIRE(z1.components().cplx[0].re.certainly_lt_q(dec("1.73205080756888")));
    REQUIRE(z1.components().cplx[0].im.contains(Rat(0)));

    // u = i (alpha = 0, +): z = sqrt(3) i
    auto zi = herm_circle(H, E, {UnitCirclePoint::from_alpha(Surd::rational(Rat(0)), +1)});
    REQUIRE(zi.components().cplx[0].im.certainly_gt_q(dec("1.73205080756887")));
    REQUIRE(zi.components().cplx[0].re.contains(Rat(0)));

    // richer form: 2 z zbar + (1+i) zbar + (1-i) z - 3 w wbar
    // center -(1+i)/2, radius sqrt(2); u = 1 gives z = sqrt(2) - 1/2 - i/2
    HermForm H2(Fi->from_rat(Rat(2)), Fi->elem({Rat(1), Rat(1)}), Fi->from_rat(Rat(-3)), cm);
    auto z2 = herm_circle(H2, E, {UnitCirclePoint::from_alpha(Surd::rational(Rat(2)), +1)});
    REQUIRE(z2.components().cplx[0].re.certainly_gt_q(dec("0.91421356237309")));
    REQUIRE(z2.components().cplx[0].re.certainly_lt_q(dec("0.91421356237310")));
    REQUIRE(z2.components().cplx[0].im.contains(dec("-0.5")));
    auto res = form_values_at(H2, z2.components(), E);
    REQUIRE(res[0].contains_zero());

    // A = 0 is a line, not a circle
    REQUIRE_THROWS_AS(
        herm_circle(HermForm(Fi->zero(), Fi->one(), Fi->from_rat(Rat(-3)), cm), E,
                    {UnitCirclePoint::from_alpha(Surd::rational(Rat(2)), +1)}),
        LineNotCircle);
}

TEST_CASE("corollary vectors over Q(i)") {
    auto Fi = NumberField::create(poly({1, 0, 1}));
    auto E = EmbeddingSet::isolate(Fi, 128);
    auto cm = cm_structure(Fi, E);

    // f = 0, e = 3, alpha = 2: z = sqrt(3)
    auto z1 = corollary_vector(Fi->zero(), Fi->from_rat(Rat(3)), {Surd::rational(Rat(2))}, {+1},
                               cm, E);
    REQUIRE(z1.components().cplx[0].re.certainly_gt_q(dec("1.73205080756887")));
    REQUIRE(z1.components().cplx[0].im.contains(Rat(0)));

    // alpha = 1, +: z = sqrt(3)/2 + (3/2) i, degree 4 over Q
    auto z2 = corollary_vector(Fi->zero(), Fi->from_rat(Rat(3)), {Surd::rational(Rat(1))}, {+1},
                               cm, E);
    REQUIRE(z2.components().cplx[0].re.certainly_gt_q(dec("0.86602540378443")));
    REQUIRE(z2.components().cplx[0].re.certainly_lt_q(dec("0.86602540378444")));
    REQUIRE(z2.components().cplx[0].im.contains(dec("1.5")));
    // H(z, 1) = |z|^2 - 3 = 3/4 + 9/4 - 3 = 0 exactly
    auto res = form_values_at(*provenance_form(z2), z2.components(), E);
    REQUIRE(res[0].contains_zero());

    // f = 1+i, e = 3, alpha = 0, +: z = (1+i) + i sqrt(3) = 1 + (1+sqrt3) i
    auto z3 = corollary_vector(Fi->elem({Rat(1), Rat(1)}), Fi->from_rat(Rat(3)),
                               {Surd::rational(Rat(0))}, {+1}, cm, E);
    REQUIRE(z3.components().cplx[0].re.contains(Rat(1)));
    REQUIRE(z3.components().cplx[0].im.certainly_gt_q(dec("2.73205080756887")));
    REQUIRE(z3.components().cplx[0].im.certainly_lt_q(dec("2.73205080756888")));

    // errors
    REQUIRE_THROWS_AS(corollary_vector(Fi->zero(), Fi->from_rat(Rat(-3)),
                                       {Surd::rational(Rat(1))}, {+1}, cm, E),
                      NotTotallyPositive);
    REQUIRE_THROWS_AS(corollary_vector(Fi->zero(), Fi->from_rat(Rat(2)),
                                       {Surd::rational(Rat(1))}, {+1}, cm, E),
                      NormObstructionMissing); // 2 = N(1+i)
    REQUIRE_THROWS_AS(corollary_vector(Fi->zero(), Fi->from_rat(Rat(3)),
                                       {Surd::rational(Rat(3))}, {+1}, cm, E),
                      Error); // |alpha| > 2
}

TEST_CASE("corollary vector with surd alpha stays on the circle") {
    auto Fi = NumberField::create(poly({1, 0, 1}));
    auto E = EmbeddingSet::isolate(Fi, 160);
    auto cm = cm_structure(Fi, E);
    auto z = corollary_vector(Fi->zero(), Fi->from_rat(Rat(3)), {parse_surd("sqrt(2)")}, {-1},
                              cm, E);
    auto res = form_values_at(*provenance_form(z), z.components(), E);
    REQUIRE(res[0].contains_zero());
    // |z|^2 = 3, with z = sqrt(3)(sqrt2 - i sqrt2)/2: re = sqrt(6)/2
    REQUIRE(z.components().cplx[0].re.certainly_gt_q(dec("1.2247448713915")));
    REQUIRE(z.components().cplx[0].re.certainly_lt_q(dec("1.2247448713917")));
    REQUIRE(z.components().cplx[0].im.certainly_lt_q(Rat(0)));
}

TEST_CASE("corollary alpha=+-2 agrees with herm_circle u=+-1") {
    auto Fi = NumberField::create(poly({1, 0, 1}));
    auto E = EmbeddingSet::isolate(Fi, 128);
    auto cm = cm_structure(Fi, E);
    HermForm H(Fi->one(), Fi->zero(), Fi->from_rat(Rat(-3)), cm);
    for (int s : {+1, -1}) {
        auto a = corollary_vector(Fi->zero(), Fi->from_rat(Rat(3)),
                                  {Surd::rational(Rat(2 * s))}, {+1}, cm, E);
        auto b = herm_circle(H, E, {UnitCirclePoint::from_alpha(Surd::rational(Rat(2 * s)), +1)});
        const auto& av = a.components().cplx[0];
        const auto& bv = b.components().cplx[0];
        // same exact point: enclosures must intersect and be tight
        REQUIRE(!(av.re.certainly_lt(bv.re) || bv.re.certainly_lt(av.re)));
        REQUIRE(!(av.im.certainly_lt(bv.im) || bv.im.certainly_lt(av.im)));
        REQUIRE(av.re.width_d() < 1e-20);
        REQUIRE(bv.re.width_d() < 1e-20);
    }
}

TEST_CASE("herm circle on the quartic CM field") {
    auto F = NumberField::create(poly({1, -1, 1, -1, 1}));
    auto E = EmbeddingSet::isolate(F, 192);
    auto cm = cm_structure(F, E);
    // H = z zbar - (theta + tau(theta) + 3) w wbar: e = phi + 3 totally positive
    auto e = F->theta() + cm.tau(F->theta()) + F->from_rat(Rat(3));
    REQUIRE(cm.is_fixed(e));
    HermForm H(F->one(), F->zero(), -e, cm);
    REQUIRE(is_totally_indefinite(H, E));
    auto z = herm_circle(H, E,
                         {UnitCirclePoint::from_alpha(Surd::rational(Rat(2)), +1),
                          UnitCirclePoint::from_alpha(Surd::rational(Rat(0)), +1)});
    auto res = form_values_at(H, z.components(), E);
    for (const auto& v : res) REQUIRE(v.contains_zero());
    // places ordered by real part put e^{3 pi i/5} first, so sigma_1(e) is
    // the conjugate value 3 + (1-sqrt5)/2 and sigma_2(e) = 3 + phi
    auto sq0 = z.components().cplx[0].re.square();
    REQUIRE(sq0.certainly_gt_q(dec("2.38196601125010515")));
    REQUIRE(sq0.certainly_lt_q(dec("2.38196601125010516")));
    auto ab1 = z.components().cplx[1].abs_sq();
    REQUIRE(ab1.certainly_gt_q(dec("4.61803398874989484")));
    REQUIRE(ab1.certainly_lt_q(dec("4.61803398874989485")));
}
