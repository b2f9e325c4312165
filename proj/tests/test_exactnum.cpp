#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "badapprox/algebraic.hpp"

using namespace badapprox;

namespace {

RatPoly poly(std::initializer_list<long> asc) {
    std::vector<Rat> c;
    for (long v : asc) c.emplace_back(v);
    return RatPoly(std::move(c));
}

FieldElem rnd_elem(const FieldPtr& F, std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 4);
    std::vector<Rat> c;
    for (int i = 0; i < F->degree(); ++i) c.push_back(make_rat(Int(num(rng)), Int(den(rng))));
    return F->elem(std::move(c));
}

} // namespace

TEST_CASE("signatures by Sturm counting") {
    REQUIRE(NumberField::create(poly({-5, 0, 1}))->real_places() == 2);
    REQUIRE(NumberField::create(poly({-5, 0, 1}))->complex_places() == 0);
    auto Qi = NumberField::create(poly({1, 0, 1}));
    REQUIRE(Qi->real_places() == 0);
    REQUIRE(Qi->complex_places() == 1);
    auto C10 = NumberField::create(poly({1, -1, 1, -1, 1}));
    REQUIRE(C10->real_places() == 0);
    REQUIRE(C10->complex_places() == 2);
    auto cubic = NumberField::create(poly({-2, 0, 0, 1}));
    REQUIRE(cubic->real_places() == 1);
    REQUIRE(cubic->complex_places() == 1);
}

TEST_CASE("degenerate defining polynomials are rejected") {
    REQUIRE_THROWS_AS(NumberField::create(poly({1, -2, 1})), NotSquarefree); // (x-1)^2
    REQUIRE_THROWS_AS(NumberField::create(poly({-1, 0, 1})), ReducibleDetected); // x^2-1
    REQUIRE_THROWS_AS(NumberField::create(poly({-4, 0, 0, 0, 1})), ReducibleDetected); // x^4-4
    REQUIRE_THROWS_AS(NumberField::create(poly({2, 3, 1})), ReducibleDetected); // (x+1)(x+2)
    REQUIRE_THROWS_AS(NumberField::create(RatPoly({Rat(1), make_rat(Int(1), Int(2)), Rat(1)})),
                      Error); // non-integral
}

TEST_CASE("field arithmetic in small fields") {
    auto F5 = NumberField::create(poly({-5, 0, 1}));
    auto rt5 = F5->theta();
    REQUIRE(rt5 * rt5 == F5->from_rat(Rat(5)));

    auto Qi = NumberField::create(poly({1, 0, 1}));
    auto onepi = Qi->elem({Rat(1), Rat(1)});
    auto inv = onepi.inverse();
    REQUIRE(inv == Qi->elem({make_rat(Int(1), Int(2)), make_rat(Int(-1), Int(2))}));
    REQUIRE(onepi * inv == Qi->one());

    // theta^{-1} = theta^2 / 2 in Q[x]/(x^3-2), from theta * theta^2 = 2
    auto C = NumberField::create(poly({-2, 0, 0, 1}));
    auto th = C->theta();
    REQUIRE(th.inverse() == C->elem({Rat(0), Rat(0), make_rat(Int(1), Int(2))}));

    REQUIRE_THROWS_AS(Qi->zero().inverse(), DivisionByZero);
    REQUIRE_THROWS_AS(onepi + F5->one(), MixedFields);
}

TEST_CASE("field axioms on random triples") {
    std::mt19937 rng(20260809);
    for (auto f : {poly({-2, 0, 1}), poly({1, 0, 1}), poly({-2, 0, 0, 1}),
                   poly({1, -1, 1, -1, 1})}) {
        auto F = NumberField::create(f);
        for (int rep = 0; rep < 25; ++rep) {
            auto a = rnd_elem(F, rng), b = rnd_elem(F, rng), c = rnd_elem(F, rng);
            REQUIRE((a * b) * c == a * (b * c));
            REQUIRE(a * (b + c) == a * b + a * c);
            REQUIRE((a + b) + c == a + (b + c));
            if (!a.is_zero()) REQUIRE(a * a.inverse() == F->one());
        }
    }
}

TEST_CASE("Sturm signature agrees with a numeric root-count oracle") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coef(-6, 6);
    int checked = 0;
    while (checked < 20) {
        int d = 2 + static_cast<int>(rng() % 3);
        std::vector<Rat> c;
        for (int i = 0; i < d; ++i) c.emplace_back(coef(rng));
        c.emplace_back(1);
        RatPoly f(std::move(c));
        if (f.degree() != d || !is_squarefree(f)) continue;
        SturmSeq st(f);
        int sturm_count = st.count_real_roots();
        auto roots = detail::dk_roots(f);
        int numeric = 0;
        for (const auto& z : roots)
            if (std::abs(z.imag()) < 1e-8) ++numeric;
        REQUIRE(sturm_count == numeric);
        ++checked;
    }
}

TEST_CASE("cm structure of Q(i)") {
    auto Qi = NumberField::create(poly({1, 0, 1}));
    auto E = EmbeddingSet::isolate(Qi, 128);
    auto cm = cm_structure(Qi, E);
    REQUIRE(cm.conj_image == Qi->elem({Rat(0), Rat(-1)}));
    REQUIRE(cm.subfield_degree() == 1);
    REQUIRE(cm.is_fixed(Qi->from_rat(Rat(7))));
    REQUIRE(!cm.is_fixed(Qi->theta()));
}

TEST_CASE("cm structure of the 10th cyclotomic field") {
    auto F = NumberField::create(poly({1, -1, 1, -1, 1}));
    auto E = EmbeddingSet::isolate(F, 192);
    auto cm = cm_structure(F, E);
    // tau(theta) = theta^{-1} = -theta^3 + theta^2 - theta + 1
    REQUIRE(cm.conj_image == F->elem({Rat(1), Rat(-1), Rat(1), Rat(-1)}));
    REQUIRE(cm.subfield_degree() == 2);
    auto th = F->theta();
    auto trace_elem = th + cm.tau(th); // theta + theta^{-1}, generates E
    REQUIRE(cm.is_fixed(trace_elem));
    std::mt19937 rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        auto a = rnd_elem(F, rng);
        REQUIRE(cm.tau(cm.tau(a)) == a);
        REQUIRE(cm.is_fixed(relative_norm(a, cm)));
    }
}

TEST_CASE("cm structure of x^4+3x^2+1 (equal real parts upstairs)") {
    auto F = NumberField::create(poly({1, 0, 3, 0, 1}));
    REQUIRE(F->complex_places() == 2);
    auto E = EmbeddingSet::isolate(F, 128);
    auto cm = cm_structure(F, E);
    REQUIRE(cm.conj_image == F->elem({Rat(0), Rat(-1), Rat(0), Rat(0)}));
    REQUIRE(cm.subfield_degree() == 2);
}

TEST_CASE("NotCM for fields with a real place") {
    auto F = NumberField::create(poly({-2, 0, 1}));
    auto E = EmbeddingSet::isolate(F, 128);
    REQUIRE_THROWS_AS(cm_structure(F, E), NotCM);
}

TEST_CASE("is_square in Q(sqrt 2)") {
    auto F = NumberField::create(poly({-2, 0, 1}));
    auto E = EmbeddingSet::isolate(F, 128);

    auto r1 = analyze_square(F->from_rat(make_rat(Int(9), Int(4))), E);
    REQUIRE(r1.is_square());
    REQUIRE((*r1.root) * (*r1.root) == F->from_rat(make_rat(Int(9), Int(4))));

    auto r2 = analyze_square(F->from_rat(Rat(2)), E);
    REQUIRE(r2.is_square());
    REQUIRE((*r2.root == F->theta() || *r2.root == -F->theta()));

    auto r3 = analyze_square(F->from_rat(Rat(3)), E);
    REQUIRE(!r3.is_square());
    REQUIRE(r3.obstruction.has_value());
    // independent oracle: 3 is a non-residue mod 7 while x^2-2 splits mod 7
    Int three(3), seven(7);
    REQUIRE(mpz_legendre(three.get_mpz_t(), seven.get_mpz_t()) == -1);

    auto neg = analyze_square(F->from_rat(Rat(-1)), E);
    REQUIRE(!neg.is_square());
    REQUIRE(neg.obstruction->kind == SquareObstruction::Kind::RealPlace);
}

TEST_CASE("is_square(a^2) recovers a up to sign") {
    std::mt19937 rng(4242);
    for (auto f : {poly({-2, 0, 1}), poly({1, 0, 1}), poly({1, -1, 1, -1, 1})}) {
        auto F = NumberField::create(f);
        auto E = EmbeddingSet::isolate(F, 128);
        for (int rep = 0; rep < 8; ++rep) {
            auto a = rnd_elem(F, rng);
            if (a.is_zero()) continue;
            auto res = analyze_square(a * a, E);
            REQUIRE(res.is_square());
            REQUIRE((*res.root == a || *res.root == -a));
        }
    }
}

TEST_CASE("relative norms") {
    auto Qi = NumberField::create(poly({1, 0, 1}));
    auto E = EmbeddingSet::isolate(Qi, 128);
    auto cm = cm_structure(Qi, E);
    auto onepi = Qi->elem({Rat(1), Rat(1)});
    REQUIRE(relative_norm(onepi, cm) == Qi->from_rat(Rat(2)));
    REQUIRE(relative_norm(Qi->zero(), cm) == Qi->zero());

    auto C10 = NumberField::create(poly({1, -1, 1, -1, 1}));
    auto E10 = EmbeddingSet::isolate(C10, 192);
    auto cm10 = cm_structure(C10, E10);
    REQUIRE(relative_norm(C10->theta(), cm10) == C10->one());
}

TEST_CASE("custom integral basis: golden order in Q(sqrt 5)") {
    auto f = poly({-5, 0, 1});
    std::vector<std::vector<Rat>> basis = {
        {Rat(1), Rat(0)},
        {make_rat(Int(1), Int(2)), make_rat(Int(1), Int(2))}}; // (1+sqrt5)/2
    auto F = NumberField::create(f, basis);
    REQUIRE(!F->has_power_basis());
    auto phi = F->elem({make_rat(Int(1), Int(2)), make_rat(Int(1), Int(2))});
    REQUIRE(phi.is_integral());
    REQUIRE(!F->elem({make_rat(Int(1), Int(2)), Rat(0)}).is_integral());
    // a basis not closed under multiplication is rejected
    std::vector<std::vector<Rat>> bad = {{Rat(1), Rat(0)},
                                         {Rat(0), make_rat(Int(1), Int(2))}};
    REQUIRE_THROWS_AS(NumberField::create(f, bad), Error);
}
