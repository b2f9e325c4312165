#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "badapprox/anisotropy.hpp"

using namespace badapprox;

namespace {

RatPoly poly(std::initializer_list<long> asc) {
    std::vector<Rat> c;
    for (long v : asc) c.emplace_back(v);
    return RatPoly(std::move(c));
}

FieldPtr Qsqrt2() { return NumberField::create(poly({-2, 0, 1})); }
FieldPtr Qi() { return NumberField::create(poly({1, 0, 1})); }
FieldPtr QQ() { return NumberField::create(poly({0, 1})); } // theta = 0, field Q

GroupElem rnd_group(const FieldPtr& F, std::mt19937& rng) {
    // product of elementary matrices with small integral entries
    auto g = GroupElem::identity(F);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int k = 0; k < 4; ++k) {
        std::vector<Rat> c;
        for (int i = 0; i < F->degree(); ++i) c.emplace_back(coef(rng));
        FieldElem u = F->elem_from_basis(c);
        if (k % 2 == 0) {
            // [[1,u],[0,1]] on the right
            g = GroupElem(g.a, g.a * u + g.b, g.c, g.c * u + g.d);
        } else {
            g = GroupElem(g.a + g.b * u, g.b, g.c + g.d * u, g.d);
        }
    }
    return g;
}

} // namespace

TEST_CASE("discriminants") {
    auto F = Qsqrt2();
    QuadForm Q(F->one(), F->zero(), F->from_rat(Rat(-3)));
    REQUIRE(Q.discriminant() == F->from_rat(Rat(-3)));

    auto Fq = QQ();
    QuadForm Q2(Fq->one(), Fq->one(), Fq->from_rat(Rat(-1)));
    REQUIRE(Q2.discriminant() == Fq->from_rat(make_rat(Int(-5), Int(4))));

    auto Fi = Qi();
    auto E = EmbeddingSet::isolate(Fi, 128);
    auto cm = cm_structure(Fi, E);
    HermForm H(Fi->one(), Fi->zero(), Fi->from_rat(Rat(-3)), cm);
    REQUIRE(H.discriminant() == Fi->from_rat(Rat(-3)));
}

TEST_CASE("total indefiniteness") {
    auto F = Qsqrt2();
    auto E = EmbeddingSet::isolate(F, 128);
    QuadForm Q(F->one(), F->zero(), F->from_rat(Rat(-3)));
    REQUIRE(is_totally_indefinite(Q, E));

    // Delta = -sqrt2 changes sign across the two real places
    QuadForm Qbad(F->one(), F->zero(), -F->theta());
    REQUIRE(!is_totally_indefinite(Qbad, E));

    auto Fi = Qi();
    auto Ei = EmbeddingSet::isolate(Fi, 128);
    auto cm = cm_structure(Fi, Ei);
    HermForm H(Fi->one(), Fi->zero(), Fi->from_rat(Rat(-3)), cm);
    REQUIRE(is_totally_indefinite(H, Ei));
    HermForm Hpos(Fi->one(), Fi->zero(), Fi->from_rat(Rat(3)), cm);
    REQUIRE(!is_totally_indefinite(Hpos, Ei));

    QuadForm Qdeg(F->one(), F->from_rat(Rat(2)), F->one()); // Delta = 0
    REQUIRE_THROWS_AS(is_totally_indefinite(Qdeg, E), DegenerateForm);
}

TEST_CASE("quadratic anisotropy verdicts") {
    auto F = Qsqrt2();
    auto E = EmbeddingSet::isolate(F, 128);

    auto v1 = is_anisotropic_quad(QuadForm(F->one(), F->zero(), F->from_rat(Rat(-3))), E);
    REQUIRE(v1.anisotropic());

    auto v2 = is_anisotropic_quad(QuadForm(F->one(), F->zero(), F->from_rat(Rat(-2))), E);
    REQUIRE(v2.isotropic());
    REQUIRE(v2.witness_zero.has_value());
    auto [x, y] = *v2.witness_zero;
    REQUIRE(!(x.is_zero() && y.is_zero()));

    auto Fq = QQ();
    auto Eq = EmbeddingSet::isolate(Fq, 128);
    auto v3 = is_anisotropic_quad(QuadForm(Fq->one(), -Fq->one(), -Fq->one()), Eq);
    REQUIRE(v3.anisotropic()); // 5/4 is not a rational square
}

TEST_CASE("Hermitian anisotropy over Q(i)") {
    auto Fi = Qi();
    auto E = EmbeddingSet::isolate(Fi, 128);
    auto cm = cm_structure(Fi, E);

    auto v3 = is_anisotropic_herm(HermForm(Fi->one(), Fi->zero(), Fi->from_rat(Rat(-3)), cm), E);
    REQUIRE(v3.anisotropic());
    REQUIRE(v3.obstruction_prime.has_value());
    REQUIRE(*v3.obstruction_prime == 3);

    auto v2 = is_anisotropic_herm(HermForm(Fi->one(), Fi->zero(), Fi->from_rat(Rat(-2)), cm), E);
    REQUIRE(v2.isotropic());
    REQUIRE(v2.norm_preimage.has_value());
    REQUIRE(relative_norm(*v2.norm_preimage, cm) == Fi->from_rat(Rat(2)));

    auto v5 = is_anisotropic_herm(HermForm(Fi->one(), Fi->zero(), Fi->from_rat(Rat(-5)), cm), E);
    REQUIRE(v5.isotropic());
    REQUIRE(relative_norm(*v5.norm_preimage, cm) == Fi->from_rat(Rat(5)));
}

TEST_CASE("Hilbert symbol satisfies the product formula") {
    std::mt19937 rng(314159);
    std::uniform_int_distribution<int> val(-30, 30);
    int done = 0;
    while (done < 30) {
        int a = val(rng), b = val(rng);
        if (a == 0 || b == 0) continue;
        auto pa = odd_prime_divisors(Int(a));
        auto pb = odd_prime_divisors(Int(b));
        std::vector<Int> places{Int(0), Int(2)};
        for (const auto& p : *pa)
            if (std::find(places.begin(), places.end(), p) == places.end()) places.push_back(p);
        for (const auto& p : *pb)
            if (std::find(places.begin(), places.end(), p) == places.end()) places.push_back(p);
        int prod = 1;
        for (const auto& v : places) prod *= hilbert_symbol(Rat(a), Rat(b), v);
        REQUIRE(prod == 1);
        ++done;
    }
}

TEST_CASE("evaluation examples") {
    auto F = Qsqrt2();
    QuadForm Q(F->one(), F->zero(), F->from_rat(Rat(-3)));
    REQUIRE(Q.evaluate(F->from_rat(Rat(2)), F->one()) == F->one());

    auto Fi = Qi();
    auto E = EmbeddingSet::isolate(Fi, 128);
    auto cm = cm_structure(Fi, E);
    HermForm H(Fi->one(), Fi->zero(), Fi->from_rat(Rat(-3)), cm);
    auto onepi = Fi->elem({Rat(1), Rat(1)});
    REQUIRE(H.evaluate(onepi, Fi->one()) == Fi->from_rat(Rat(-1)));

    // Fibonacci identity: F_{k+1}^2 - F_{k+1} F_k - F_k^2 = (-1)^k
    auto Fq = QQ();
    QuadForm Fib(Fq->one(), -Fq->one(), -Fq->one());
    long fk = 1, fk1 = 1;
    for (int k = 1; k <= 10; ++k) {
        auto val = Fib.evaluate(Fq->from_rat(Rat(fk1)), Fq->from_rat(Rat(fk)));
        REQUIRE(val == Fq->from_rat(Rat(k % 2 == 0 ? 1 : -1)));
        long nxt = fk + fk1;
        fk = fk1;
        fk1 = nxt;
    }
}

TEST_CASE("group action on quadratic forms") {
    auto F = Qsqrt2();
    QuadForm Q(F->one(), F->zero(), F->from_rat(Rat(-3)));
    auto id = GroupElem::identity(F);
    REQUIRE(act(id, Q) == Q);

    // g = [[1,1],[0,1]]: Q(x+y, y) = x^2 + 2xy - 2y^2
    GroupElem g(F->one(), F->one(), F->zero(), F->one());
    auto Qg = act(g, Q);
    REQUIRE(Qg.A == F->one());
    REQUIRE(Qg.B == F->from_rat(Rat(2)));
    REQUIRE(Qg.C == F->from_rat(Rat(-2)));
}

TEST_CASE("discriminant invariance and change-of-variable compatibility") {
    std::mt19937 rng(2718);
    auto F = Qsqrt2();
    QuadForm Q(F->one(), F->theta(), F->from_rat(Rat(-3)));
    auto Fi = Qi();
    auto Ei = EmbeddingSet::isolate(Fi, 128);
    auto cm = cm_structure(Fi, Ei);
    HermForm H(Fi->from_rat(Rat(2)), Fi->elem({Rat(1), Rat(1)}), Fi->from_rat(Rat(-3)), cm);

    std::uniform_int_distribution<int> coef(-5, 5);
    for (int rep = 0; rep < 20; ++rep) {
        auto g = rnd_group(F, rng);
        auto Qg = act(g, Q);
        REQUIRE(Qg.discriminant() == Q.discriminant());
        // evaluate(Q^g, x, y) = evaluate(Q, ax+by, cx+dy)
        std::vector<Rat> xc, yc;
        for (int i = 0; i < F->degree(); ++i) {
            xc.emplace_back(coef(rng));
            yc.emplace_back(coef(rng));
        }
        auto x = F->elem(xc), y = F->elem(yc);
        REQUIRE(Qg.evaluate(x, y) == Q.evaluate(g.a * x + g.b * y, g.c * x + g.d * y));

        auto gi = rnd_group(Fi, rng);
        auto Hg = act(gi, H);
        REQUIRE(Hg.discriminant() == H.discriminant());
        std::vector<Rat> zc, wc;
        for (int i = 0; i < Fi->degree(); ++i) {
            zc.emplace_back(coef(rng));
            wc.emplace_back(coef(rng));
        }
        auto z = Fi->elem(zc), w = Fi->elem(wc);
        REQUIRE(Hg.evaluate(z, w) == H.evaluate(gi.a * z + gi.b * w, gi.c * z + gi.d * w));
    }
}

TEST_CASE("anisotropic verdicts agree with brute force over Q(sqrt 2)") {
    // q = p^2 - 3 q^2 = 0 has no solution with coordinate height <= 20:
    // (a + b sqrt2)^2 = 3 (c + d sqrt2)^2 expands to two integer equations.
    for (long a = -20; a <= 20; ++a)
        for (long b = -20; b <= 20; ++b)
            for (long c = 0; c <= 20; ++c)
                for (long d = -20; d <= 20; ++d) {
                    if (a == 0 && b == 0 && c == 0 && d == 0) continue;
                    long lhs1 = a * a + 2 * b * b - 3 * (c * c + 2 * d * d);
                    long lhs2 = 2 * a * b - 6 * c * d;
                    bool zero = (lhs1 == 0 && lhs2 == 0);
                    REQUIRE(!zero);
                }
}

TEST_CASE("isotropic witnesses evaluate to zero exactly") {
    auto F = Qsqrt2();
    auto E = EmbeddingSet::isolate(F, 128);
    auto v = is_anisotropic_quad(QuadForm(F->one(), F->theta(), F->from_rat(Rat(-1))), E);
    if (v.isotropic()) {
        auto [x, y] = *v.witness_zero;
        QuadForm Q(F->one(), F->theta(), F->from_rat(Rat(-1)));
        REQUIRE(Q.evaluate(x, y) == F->zero());
    }
    // Delta = -1 - 1/2 = -3/2... -Delta = 3/2 + ... just require a verdict
    REQUIRE(v.status != AnisotropyVerdict::Status::Unknown);
}
