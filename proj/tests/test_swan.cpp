#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/brute_force.hpp"
#include "swan.hpp"

using namespace swancond;

namespace {

CoverSpec worked_cover(FieldCtxPtr W) {
    CoverSpec c;
    c.ctx = W;
    c.alpha0 = 0;
    c.branch = {{Elem::from_integer(W, 3), 1}, {Elem::from_integer(W, 24), 1}};
    c.unit_u = LaurentSeries::one(W);
    c.r0 = Rat(1);
    return c;
}

LaurentSeries series(FieldCtxPtr W, std::initializer_list<std::pair<long, long>> terms) {
    LaurentSeries s(W);
    for (auto& [d, c] : terms) s.set_coeff(d, Elem::from_integer(W, c));
    return s;
}

RationalFn rf(FqCtxPtr fq, std::initializer_list<unsigned long> num,
              std::initializer_list<unsigned long> den) {
    std::vector<FqElem> n, d;
    for (auto c : num) n.emplace_back(fq, c);
    for (auto c : den) d.emplace_back(fq, c);
    return RationalFn(FqPoly(fq, n), FqPoly(fq, d));
}

}  // namespace

TEST_CASE("elimination: perfect square leaves nothing") {
    auto W = make_field(2, 1, 1, 48);
    LaurentSeries G = series(W, {{0, 1}, {-1, 4}, {-2, 4}});
    auto res = eliminate(G, 2, true);
    CHECK(res.corrector.coeff(-1).indistinguishable(Elem::from_integer(W, 2)));
    for (auto& [d, c] : res.remainder.terms()) {
        Valuation v = c.val_info();
        CHECK((v.is_infinite() || v.lower_bound() >= W->guard()));
    }
}

TEST_CASE("elimination: spec p=2 example with nonzero remainder") {
    auto W = make_field(2, 1, 1, 48);
    LaurentSeries G = series(W, {{0, 1}, {-1, 2}, {-2, 4}});
    auto res = eliminate(G, 2, true);
    CHECK(res.corrector.coeff(-1).indistinguishable(Elem::from_integer(W, 2)));
    CHECK(res.corrector.coeff(-2).is_exact_zero());
    Valuation c1 = res.c_valuation(1);
    REQUIRE(c1.is_exact());
    CHECK(c1.value == Rat(1));  // remainder -2 T^-1
    // targets vanished
    Valuation c2 = res.c_valuation(2);
    CHECK((c2.is_infinite() || c2.lower_bound() >= W->guard()));
    Valuation c4 = res.c_valuation(4);
    CHECK((c4.is_infinite() || c4.lower_bound() >= W->guard()));
}

TEST_CASE("elimination: no constraints when no target degrees are populated") {
    auto W = make_field(3, 1, 1, 48);
    LaurentSeries G = series(W, {{0, 1}, {-1, 27}, {-2, 72}});
    auto res = eliminate(G, 2, true);
    CHECK(res.corrector.terms().size() == 1);  // I = 1
    CHECK(res.remainder.coeff(-1).indistinguishable(Elem::from_integer(W, 27)));
    CHECK(res.remainder.coeff(-2).indistinguishable(Elem::from_integer(W, 72)));
}

TEST_CASE("elimination valuations do not depend on the root choice") {
    auto W = make_field(2, 1, 1, 48);
    LaurentSeries G = series(W, {{0, 1}, {-1, 2}, {-2, 4}});
    auto first = eliminate(G, 2, true, RootChoice::First);
    auto last = eliminate(G, 2, true, RootChoice::Last);
    for (long i = 1; i <= 4; ++i) {
        Valuation a = first.c_valuation(i), b = last.c_valuation(i);
        if (a.is_exact() && a.value < W->guard()) {
            REQUIRE(b.is_exact());
            CHECK(a.value == b.value);
        } else {
            CHECK_FALSE((b.is_exact() && b.value < W->guard()));
        }
    }
}

TEST_CASE("worked cover: swan value at r = 1/2") {
    auto W = make_field(3, 1, 2, 48);
    CoverAnalysis an(worked_cover(W), {});
    CHECK(an.branch_count() == 3);  // T = 0 counts

    SwanValue v = an.swan_at(rat(1, 2));
    CHECK(v.depth == rat(1, 2));
    CHECK(v.regime == SwanRegime::ExactDifferential);
    REQUIRE(v.form.has_value());
    // 2 t^-3 dt
    CHECK(v.form->coefficient() == rf(W->fq(), {2}, {0, 0, 0, 1}));
    CHECK(v.form->ord_at(Place::zero(W->fq())) == -3);
    CHECK(v.form->ord_at(Place::infinity(W->fq())) == 1);
    CHECK(v.form->degree_check() == -2);
}

TEST_CASE("worked cover: depth vanishes at r = 1/8 and the oracle agrees") {
    auto W = make_field(3, 1, 8, 48);
    CoverAnalysis an(worked_cover(W), {});
    CHECK(an.depth_at(rat(1, 8)) == Rat(0));
    CHECK(an.swan_at(rat(1, 8)).regime == SwanRegime::ZeroDepth);

    // independent exhaustive-H oracle, exact integer arithmetic
    brute::Series F{{0, 1}, {-1, -27}, {-2, 72}};
    mpq_class d_half = brute::depth_oracle(F, 3, mpq_class(1, 2), {-1, -2}, 4);
    CHECK(d_half == mpq_class(1, 2));
    mpq_class d_eighth = brute::depth_oracle(F, 3, mpq_class(1, 8), {-1, -2}, 4);
    CHECK(d_eighth == 0);
    CHECK(an.depth_at(rat(1, 2)) == rat(1, 2));
}

TEST_CASE("alpha0 != 0 pins the depth at p/(p-1) with a logarithmic form") {
    auto W = make_field(3, 1, 2, 48);
    CoverSpec c;
    c.ctx = W;
    c.alpha0 = 1;
    c.unit_u = LaurentSeries::one(W);
    c.r0 = Rat(1);
    CoverAnalysis an(c, {});
    for (long k = 1; k <= 2; ++k) {
        SwanValue v = an.swan_at(rat(k, 2));
        CHECK(v.depth == rat(3, 2));
        CHECK(v.regime == SwanRegime::Logarithmic);
        REQUIRE(v.form.has_value());
        CHECK(v.form->coefficient() == rf(W->fq(), {1}, {0, 1}));  // dt/t
        CHECK(v.form->degree_check() == -2);
    }
    CHECK(an.left_slope_at(rat(1, 2)) == 0);
}

TEST_CASE("worked cover slopes via the analysis") {
    auto W = make_field(3, 1, 8, 48);
    CoverAnalysis an(worked_cover(W), {});
    CHECK(an.left_slope_at(rat(1, 2)) == 2);
    CHECK(an.right_slope_at(rat(1, 2)) == 2);
    CHECK(an.left_slope_at(rat(1, 8)) == 0);
    CHECK(an.left_slope_at(rat(1, 4)) == 0);   // kink radius: flat from the left
    CHECK(an.right_slope_at(rat(1, 4)) == 2);  // rising to the right
    CHECK(an.left_slope_at(Rat(1)) == 2);
}

TEST_CASE("logarithmic boundary at r = r0 uses dlog of the full reduction") {
    auto W = make_field(3, 1, 1, 48);
    CoverAnalysis an(worked_cover(W), {});
    SwanValue v = an.swan_at(Rat(1));
    CHECK(v.depth == rat(3, 2));
    CHECK(v.regime == SwanRegime::Logarithmic);
    REQUIRE(v.form.has_value());
    // ord duality at the left edge: slope 2 = ord_inf + 1
    CHECK(v.form->ord_at(Place::infinity(W->fq())) == 1);
    CHECK(v.form->degree_check() == -2);
}

TEST_CASE("mu and the closed-form lambda on the worked covers") {
    auto W = make_field(3, 1, 2, 48);
    CoverAnalysis a(worked_cover(W), {});
    MuResult mu_a = mu_invariant(a, 1, 2);
    REQUIRE_FALSE(mu_a.infinite);
    CHECK(mu_a.value == Rat(0));  // (v(c_2)-v(c_1))/(2-1) = (2-3) < 0

    LambdaResult la = lambda_closed_form(a);
    CHECK(la.m == 2);
    CHECK(la.value == rat(1, 4));  // max(0, (2 - 3/2)/2)

    CoverSpec b = worked_cover(W);
    b.branch[1].x = Elem::from_integer(W, 12);
    CoverAnalysis ab(b, {});
    MuResult mu_b = mu_invariant(ab, 1, 2);
    REQUIRE_FALSE(mu_b.infinite);
    CHECK(mu_b.value == Rat(1));  // (2-1)/(2-1)
    LambdaResult lb = lambda_closed_form(ab);
    CHECK(lb.value == Rat(1));
}

TEST_CASE("lambda special branches") {
    auto W = make_field(3, 1, 1, 48);
    // alpha0 != 0 with only the origin branched: m = 0, lambda = 0
    CoverSpec c0;
    c0.ctx = W;
    c0.alpha0 = 1;
    c0.unit_u = LaurentSeries::one(W);
    c0.r0 = Rat(1);
    CoverAnalysis an0(c0, {});
    LambdaResult l0 = lambda_closed_form(an0);
    CHECK(l0.m == 0);
    CHECK(l0.value == Rat(0));

    // alpha0 = 2 with one branch point: the origin is also branched
    // (order 2 - 1 = 1 prime to 3), so m = 1 and lambda = r0
    CoverSpec c1 = c0;
    c1.alpha0 = 2;
    c1.branch = {{Elem::from_integer(W, 3), 1}};
    CoverAnalysis an1(c1, {});
    LambdaResult l1 = lambda_closed_form(an1);
    CHECK(l1.m == 1);
    CHECK(l1.value == Rat(1));

    // alpha0 = 1 with one branch point of the same multiplicity: the origin
    // order is divisible by p, so exactly one branch point and m = 0
    CoverSpec c1b = c0;
    c1b.alpha0 = 1;
    c1b.branch = {{Elem::from_integer(W, 3), 1}};
    CoverAnalysis an1b(c1b, {});
    LambdaResult l1b = lambda_closed_form(an1b);
    CHECK(l1b.m == 0);
    CHECK(l1b.value == Rat(0));

    // p | m: three points with alpha summing to 4, so the origin is also
    // branched: |B| = 4 and m = 3 = p
    CoverSpec c2;
    c2.ctx = W;
    c2.alpha0 = 0;
    c2.unit_u = LaurentSeries::one(W);
    c2.branch = {{Elem::from_integer(W, 3), 1},
                 {Elem::from_integer(W, 6), 1},
                 {Elem::from_integer(W, 12), 2}};
    CoverWorkspace ws2(c2, {});
    const CoverAnalysis& an2 = ws2.analysis();
    LambdaResult l2 = lambda_closed_form(an2);
    CHECK(l2.m == 3);
    CHECK(l2.branch == "slope-divisible-by-p");
    CHECK(l2.value == Rat(1));
}

TEST_CASE("power twist scales the form and keeps the depth") {
    auto W = make_field(3, 1, 2, 48);
    CoverAnalysis an(worked_cover(W), {});
    SwanValue v = an.swan_at(rat(1, 2));
    SwanValue t = swan_power_twist(v, 2, 3);
    CHECK(t.depth == v.depth);
    REQUIRE(t.form.has_value());
    CHECK(t.form->coefficient() == rf(W->fq(), {1}, {0, 0, 0, 1}));  // 4 = 1 mod 3
    SwanValue id = swan_power_twist(v, 1, 3);
    CHECK(id.form->coefficient() == v.form->coefficient());
    SwanValue z{Rat(0), std::nullopt, SwanRegime::ZeroDepth};
    CHECK(swan_power_twist(z, 2, 3).depth == Rat(0));
    CHECK_THROWS_AS((void)swan_power_twist(v, 3, 3), SwanError);
}

TEST_CASE("slope divisibility guard") {
    auto W = make_field(3, 1, 2, 48);
    SwanValue log_value{rat(3, 2), std::nullopt, SwanRegime::Logarithmic};
    CHECK_NOTHROW(slope_divisibility_guard(log_value, 0, 3));
    SwanValue mid{rat(1, 2), std::nullopt, SwanRegime::ExactDifferential};
    CHECK_THROWS_AS(slope_divisibility_guard(mid, 3, 3), SwanError);
    CHECK_NOTHROW(slope_divisibility_guard(mid, 2, 3));
}

TEST_CASE("additivity on a product of covers") {
    auto W = make_field(3, 1, 2, 48);
    CoverSpec a = worked_cover(W);
    CoverSpec b = worked_cover(W);
    b.branch = {{Elem::from_integer(W, 9), 1}};
    b.alpha0 = 1;  // makes b's depth constant 3/2

    CoverAnalysis aa(a, {}), ab(b, {});
    Rat r = rat(1, 2);
    SwanValue va = aa.swan_at(r), vb = ab.swan_at(r);

    LaurentSeries u = a.unit_u * b.unit_u;
    LaurentSeries f = a.f_tilde_unit() * b.f_tilde_unit();
    SwanValue vprod = swan_of_series(u, f, a.alpha0 + b.alpha0, r);
    CHECK(vprod.depth <= std::max(va.depth, vb.depth));
    REQUIRE(va.form.has_value());
    REQUIRE(vb.form.has_value());
    ResidueDifferential sum = *va.form + *vb.form;
    if (!sum.is_zero()) {
        CHECK(vprod.depth == std::max(va.depth, vb.depth));
        CHECK(*vprod.form == (va.depth > vb.depth ? *va.form
                                                  : (vb.depth > va.depth ? *vb.form : sum)));
    }
}

TEST_CASE("product of a cover with its inverse power cancels") {
    auto W = make_field(3, 1, 2, 48);
    CoverSpec a = worked_cover(W);
    // F * F^2 = F^3 is a cube: depth 0 everywhere
    LaurentSeries f1 = a.f_tilde_unit();
    LaurentSeries f = f1 * f1 * f1;
    SwanValue v = swan_of_series_auto(LaurentSeries::one(W), f, 0, rat(1, 2));
    CHECK(v.depth == Rat(0));
}

TEST_CASE("Kummer-power invariance of the depth") {
    auto W = make_field(3, 1, 2, 48);
    CoverSpec a = worked_cover(W);
    LaurentSeries f = a.f_tilde_unit();
    Rat r = rat(1, 2);
    SwanValue v1 = swan_of_series_auto(a.unit_u, f, 0, r);
    SwanValue v2 = swan_of_series_auto(a.unit_u, f * f, 0, r);
    CHECK(v1.depth == v2.depth);
    REQUIRE(v2.form.has_value());
    ResidueDifferential twisted = v1.form->scale(FqElem(W->fq(), 2ul));
    CHECK(*v2.form == twisted);
}

TEST_CASE("two-sided product elimination path agrees with the component path") {
    auto W = make_field(3, 1, 2, 48);
    CoverSpec a = worked_cover(W);
    CoverSpec b;
    b.ctx = W;
    b.alpha0 = 0;
    b.branch = {{Elem::from_integer(W, 9), 2}};
    b.unit_u = series(W, {{0, 1}, {1, 3}});
    b.r0 = Rat(1);

    LaurentSeries u = a.unit_u * b.unit_u;
    LaurentSeries f = a.f_tilde_unit() * b.f_tilde_unit();
    for (long k = 1; k <= 2; ++k) {
        Rat r = rat(k, 2);
        SwanValue comp = swan_of_series_auto(u, f, 0, r);
        SwanValue prod = swan_of_product_series_auto(u * f, 0, r);
        CHECK(comp.depth == prod.depth);
        if (comp.form && prod.form && comp.regime == SwanRegime::ExactDifferential)
            CHECK(*comp.form == *prod.form);
    }
}

TEST_CASE("workspace auto-extends when an elimination needs new radii or roots") {
    auto W = make_field(3, 1, 1, 48);
    CoverSpec c;
    c.ctx = W;
    c.alpha0 = 0;
    c.unit_u = LaurentSeries::one(W);
    c.branch = {{Elem::from_integer(W, 9), 1},
                {Elem::from_integer(W, 3), 1},
                {Elem::from_integer(W, 6), 1}};
    c.r0 = Rat(1);
    // c_3 = -(9*3*6) has valuation 4: its cube root lives outside every
    // pi^e = p extension, so that target stalls; the stalled line never
    // dominates on (0, 1], and the depth profile is exact without it
    CoverWorkspace ws(c, {});
    const CoverAnalysis& an = ws.analysis();
    CHECK_FALSE(an.stalled_targets().empty());
    CHECK(an.depth_at(rat(1, 2)) == rat(1, 2));   // max(0, r - 1/2, 2r - 1/2)
    CHECK(an.depth_at(rat(1, 4)) == Rat(0));
    CHECK(an.depth_at(Rat(1)) == an.depth_cap());  // boundary radius
    LambdaResult l = lambda_closed_form(an);
    CHECK(l.m == 2);
    CHECK(l.value == rat(1, 4));
}

TEST_CASE("depth is within [0, p/(p-1)] and slopes match ord duality on samples") {
    auto W = make_field(3, 1, 4, 48);
    CoverAnalysis an(worked_cover(W), {});
    for (long k = 1; k <= 4; ++k) {
        Rat r = rat(k, 4);
        Rat d = an.depth_at(r);
        CHECK(d >= 0);
        CHECK(d <= an.depth_cap());
        SwanValue v = an.swan_at(r);
        if (v.depth > 0) {
            CHECK(an.left_slope_at(r) ==
                  v.form->ord_at(Place::infinity(W->fq())) + 1);
            if (r < an.r0())
                CHECK(an.right_slope_at(r) == -v.form->ord_at(Place::zero(W->fq())) - 1);
        }
    }
}
