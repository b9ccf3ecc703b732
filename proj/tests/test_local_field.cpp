#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "local_field.hpp"
#include "local_poly.hpp"

using namespace swancond;

TEST_CASE("valuations in a ramified field") {
    auto W = make_field(3, 1, 2, 48);  // pi^2 = 3
    CHECK(*Elem::from_integer(W, 3).valuation() == Rat(1));
    CHECK(*Elem::pi_power(W, 1).valuation() == rat(1, 2));
    CHECK(*Elem::from_integer(W, 72).valuation() == Rat(2));
    CHECK_FALSE(Elem::zero(W).valuation().has_value());
    CHECK(*Elem::from_rational(W, rat(1, 3)).valuation() == Rat(-1));
}

TEST_CASE("valuation axioms on arithmetic") {
    auto W = make_field(5, 1, 2, 32);
    std::vector<Elem> xs = {
        Elem::from_integer(W, 7),  Elem::from_integer(W, 50),
        Elem::pi_power(W, 3),      Elem::from_integer(W, -5),
        Elem::from_rational(W, rat(2, 5)),
    };
    for (auto& a : xs)
        for (auto& b : xs) {
            Rat va = *a.valuation(), vb = *b.valuation();
            CHECK(*(a * b).valuation() == va + vb);
            Elem s = a + b;
            if (s.is_normal()) CHECK(*s.valuation() >= std::min(va, vb));
            if (va != vb) CHECK(*s.valuation() == std::min(va, vb));
        }
}

TEST_CASE("exact cancellation is recognized") {
    auto W = make_field(3, 1, 1, 8);
    Elem a = Elem::from_integer(W, 10);
    CHECK((a - a).is_exact_zero());
    CHECK((a * a - Elem::from_integer(W, 100)).is_exact_zero());
}

TEST_CASE("inexact cancellation is sound, not silently wrong") {
    auto W = make_field(3, 2, 1, 8);  // f = 2: inverses are digit approximations
    Elem a = Elem::from_integer(W, 7).inverse();
    Elem d = a - a;
    // the difference of two copies of an approximation carries no exactness
    CHECK(d.is_below_precision());
    CHECK_THROWS_AS((void)d.valuation(), SwanError);
}

TEST_CASE("residues") {
    auto W = make_field(3, 1, 2, 48);
    CHECK(Elem::from_integer(W, 8).residue() == FqElem(W->fq(), 2ul));
    CHECK(Elem::from_integer(W, 1 + 3).residue() == FqElem(W->fq(), 1ul));
    Elem pi = Elem::pi_power(W, 1);
    CHECK((pi / pi).residue() == FqElem(W->fq(), 1ul));
    CHECK_THROWS_AS((void)Elem::from_integer(W, 3).residue(), SwanError);
}

TEST_CASE("guard band raises instead of reporting") {
    auto W = make_field(3, 1, 1, 8);
    Elem big = Elem::from_integer(W, 3).pow(7);  // v = 7 >= N-2 = 6
    CHECK_THROWS_AS((void)big.valuation(), SwanError);
}

TEST_CASE("inverse and division") {
    auto W = make_field(2, 1, 1, 40);
    Elem x = Elem::from_integer(W, 7);
    Elem xi = x.inverse();
    CHECK((x * xi - Elem::one(W)).is_zeroish());
    Elem y = Elem::from_integer(W, 48);  // 16 * 3
    CHECK(*(y / x).valuation() == Rat(4));
}

TEST_CASE("roots of x^2 - 4 over Q_2") {
    auto W = make_field(2, 1, 1, 48);
    LPoly poly = {Elem::from_integer(W, -4), Elem::zero(W), Elem::one(W)};
    auto res = find_roots(poly);
    REQUIRE(res.roots.size() == 2);
    CHECK_FALSE(res.extension_needed.has_value());
    Elem two = Elem::from_integer(W, 2);
    CHECK(res.roots[0].indistinguishable(two));
    CHECK(res.roots[1].indistinguishable(-two));
}

TEST_CASE("Hensel lift: x^2 - 9 over Q_2 from x = 1 (mod 2)") {
    auto W = make_field(2, 1, 1, 48);
    LPoly poly = {Elem::from_integer(W, -9), Elem::zero(W), Elem::one(W)};
    auto res = find_roots(poly);
    REQUIRE(res.roots.size() == 2);
    Elem three = Elem::from_integer(W, 3);
    bool saw_pos = false, saw_neg = false;
    for (auto& r : res.roots) {
        if (r.indistinguishable(three)) saw_pos = true;
        if (r.indistinguishable(-three)) saw_neg = true;
        CHECK(lpoly_eval(poly, r).is_zeroish());
    }
    CHECK(saw_pos);
    CHECK(saw_neg);
}

TEST_CASE("x^3 - 3 with pi^3 = 3: one root, extension reported") {
    auto W = make_field(3, 1, 3, 48);
    LPoly poly = {Elem::from_integer(W, -3), Elem::zero(W), Elem::zero(W), Elem::one(W)};
    auto res = find_roots(poly);
    REQUIRE(res.roots.size() == 1);
    CHECK(res.roots[0].indistinguishable(Elem::pi_power(W, 1)));
    REQUIRE(res.extension_needed.has_value());
    CHECK(res.extension_needed->first == 2);  // slope denominator needs e *= 2
}

TEST_CASE("fractional-slope segment requests the minimal e multiplier") {
    auto W = make_field(3, 1, 1, 48);
    // x^2 - 3: roots have valuation 1/2
    LPoly poly = {Elem::from_integer(W, -3), Elem::zero(W), Elem::one(W)};
    auto res = find_roots(poly);
    CHECK(res.roots.empty());
    REQUIRE(res.extension_needed.has_value());
    CHECK(res.extension_needed->first == 2);
    CHECK(res.extension_needed->second == 1);

    // and after extending, the roots exist
    FieldEmbedding emb(W, 2, 1, 64);
    LPoly poly2 = {emb.apply(poly[0]), emb.apply(poly[1]), emb.apply(poly[2])};
    auto res2 = find_roots(poly2);
    CHECK(res2.roots.size() == 2);
}

TEST_CASE("residue-field extension requested when residual factor is irreducible") {
    auto W = make_field(3, 1, 1, 48);
    // x^2 + 1 over Q_3 needs the unramified quadratic extension
    LPoly poly = {Elem::from_integer(W, 1), Elem::zero(W), Elem::one(W)};
    auto res = find_roots(poly);
    CHECK(res.roots.empty());
    REQUIRE(res.extension_needed.has_value());
    CHECK(res.extension_needed->second == 2);

    FieldEmbedding emb(W, 1, 2, 64);
    LPoly poly2 = {emb.apply(poly[0]), emb.apply(poly[1]), emb.apply(poly[2])};
    auto res2 = find_roots(poly2);
    REQUIRE(res2.roots.size() == 2);
    for (auto& r : res2.roots) CHECK(lpoly_eval(poly2, r).is_zeroish());
}

TEST_CASE("repeated roots via recursion: (x-1)^2(x-4)") {
    auto W = make_field(3, 1, 1, 40);
    // expand (x-1)^2 (x-4) = x^3 - 6x^2 + 9x - 4
    LPoly poly = {Elem::from_integer(W, -4), Elem::from_integer(W, 9),
                  Elem::from_integer(W, -6), Elem::one(W)};
    auto res = find_roots(poly);
    REQUIRE(res.roots.size() == 3);
    long ones = 0, fours = 0;
    for (auto& r : res.roots) {
        if (r.indistinguishable(Elem::one(W))) ++ones;
        if (r.indistinguishable(Elem::from_integer(W, 4))) ++fours;
    }
    CHECK(ones == 2);
    CHECK(fours == 1);
}

TEST_CASE("field embedding preserves valuation and residue") {
    auto W = make_field(3, 1, 1, 48);
    FieldEmbedding emb(W, 2, 2, 64);
    Elem x = Elem::from_integer(W, 72);
    CHECK(*emb.apply(x).valuation() == Rat(2));
    CHECK(*emb.apply(Elem::from_integer(W, 3)).valuation() == Rat(1));
    CHECK(*Elem::pi_power(emb.to(), 1).valuation() == rat(1, 2));
    Elem u = Elem::from_integer(W, 5);
    CHECK(emb.apply_residue(u.residue()) == emb.apply(u).residue());
    // identity multipliers keep the same configuration
    FieldEmbedding id(W, 1, 1, 64);
    CHECK(id.to()->same(*W));
    CHECK(id.apply(x).indistinguishable(Elem::from_integer(id.to(), 72)));
}

TEST_CASE("deterministic root order takes +2 before -2") {
    auto W = make_field(2, 1, 1, 48);
    LPoly poly = {Elem::from_integer(W, -4), Elem::zero(W), Elem::one(W)};
    auto res = find_roots(poly);
    REQUIRE(res.roots.size() == 2);
    CHECK(res.roots[0].indistinguishable(Elem::from_integer(W, 2)));
}
