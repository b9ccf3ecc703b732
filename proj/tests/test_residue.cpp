#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fq.hpp"
#include "residue_fn.hpp"

using namespace swancond;

namespace {

FqCtxPtr F3() { return std::make_shared<const FqCtx>(3, 1); }

FqPoly poly_from(FqCtxPtr ctx, std::initializer_list<unsigned long> coeffs) {
    std::vector<FqElem> v;
    for (unsigned long c : coeffs) v.emplace_back(ctx, c);
    return FqPoly(std::move(ctx), std::move(v));
}

}  // namespace

TEST_CASE("F_q basics and Frobenius") {
    auto f3 = F3();
    FqElem two(f3, 2ul);
    CHECK(two * two == FqElem(f3, 1ul));
    CHECK(two.inverse() == two);
    CHECK(two.pth_root() == two);  // Frobenius is identity on F_p

    auto f9 = std::make_shared<const FqCtx>(3, 2);
    // every element has a unique cube root
    for (unsigned long k = 0; k < f9->q(); ++k) {
        FqElem x = FqElem::from_index(f9, k);
        CHECK(x.pth_root().pow(3) == x);
    }
}

TEST_CASE("polynomial division and gcd") {
    auto f3 = F3();
    FqPoly a = poly_from(f3, {1, 0, 1});      // 1 + t^2
    FqPoly b = poly_from(f3, {1, 1});         // 1 + t
    auto [q, r] = (a * b).divmod(b);
    CHECK(q == a);
    CHECK(r.is_zero());
    CHECK(FqPoly::gcd(a * b, b) == b.monic());
}

TEST_CASE("p-th power detection in F_3(t)") {
    auto f3 = F3();
    // t^3 + t^6 = (t + t^2)^3
    RationalFn g = RationalFn::from_poly(poly_from(f3, {0, 0, 0, 1, 0, 0, 1}));
    CHECK(is_pth_power(g));
    CHECK(pth_root(g) == RationalFn::from_poly(poly_from(f3, {0, 1, 1})));

    RationalFn t2 = RationalFn::from_poly(poly_from(f3, {0, 0, 1}));
    CHECK_FALSE(is_pth_power(t2));

    // 2/t^2
    RationalFn h(poly_from(f3, {2}), poly_from(f3, {0, 0, 1}));
    CHECK_FALSE(is_pth_power(h));

    // t^6/(t+1)^3 -> t^2/(t+1)
    RationalFn k(poly_from(f3, {0, 0, 0, 0, 0, 0, 1}), poly_from(f3, {1, 1}).pow(3));
    CHECK(is_pth_power(k));
    RationalFn kr = pth_root(k);
    CHECK(kr == RationalFn(poly_from(f3, {0, 0, 1}), poly_from(f3, {1, 1})));

    CHECK(is_pth_power(RationalFn::one(f3)));
    CHECK(pth_root(RationalFn::one(f3)) == RationalFn::one(f3));
}

TEST_CASE("differential orders and the degree identity") {
    auto f3 = F3();
    // dt/t
    ResidueDifferential w1(RationalFn(poly_from(f3, {1}), poly_from(f3, {0, 1})));
    CHECK(w1.ord_at(Place::zero(f3)) == -1);
    CHECK(w1.ord_at(Place::infinity(f3)) == -1);
    CHECK(w1.degree_check() == -2);

    // 2 t^-3 dt
    ResidueDifferential w2(RationalFn(poly_from(f3, {2}), poly_from(f3, {0, 0, 0, 1})));
    CHECK(w2.ord_at(Place::zero(f3)) == -3);
    CHECK(w2.ord_at(Place::infinity(f3)) == 1);
    CHECK(w2.degree_check() == -2);

    // dt
    ResidueDifferential w3(RationalFn::one(f3));
    CHECK(w3.ord_at(Place::zero(f3)) == 0);
    CHECK(w3.ord_at(Place::infinity(f3)) == -2);
    CHECK(w3.degree_check() == -2);
}

TEST_CASE("derivation kills p-th powers and satisfies Leibniz") {
    auto f3 = F3();
    RationalFn g(poly_from(f3, {1, 2, 0, 1}), poly_from(f3, {1, 1}));
    RationalFn h(poly_from(f3, {0, 1, 1}), poly_from(f3, {2, 0, 1}));
    RationalFn gp = g * g * g;
    CHECK(gp.derivative().is_zero());
    CHECK((g * h).derivative() == g.derivative() * h + g * h.derivative());
}

TEST_CASE("factorization with multiplicities over F_9") {
    auto f9 = std::make_shared<const FqCtx>(3, 2);
    FqPoly t = FqPoly::t(f9);
    FqPoly one = FqPoly::constant(FqElem::one(f9));
    FqPoly irr2 = t * t + one;  // t^2 + 1 splits over F_9
    FqPoly prod = (t + one).pow(2) * irr2;
    auto fac = fq_factor(prod);
    long total = 0;
    for (auto& [f, m] : fac.factors) total += f.degree() * m;
    CHECK(total == prod.degree());
    for (auto& [f, m] : fac.factors) CHECK(f.is_monic());
    // reassemble
    FqPoly re = FqPoly::constant(fac.lead);
    for (auto& [f, m] : fac.factors) re = re * f.pow(m);
    CHECK(re == prod);
}

TEST_CASE("degree-2 irreducible stays irreducible over F_3") {
    auto f3 = F3();
    FqPoly irr = poly_from(f3, {1, 0, 1});  // t^2 + 1, irreducible mod 3
    auto fac = fq_factor(irr);
    REQUIRE(fac.factors.size() == 1);
    CHECK(fac.factors[0].first.degree() == 2);
    CHECK(fq_min_factor_degree(irr) == 2);
}
