#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "profile.hpp"

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

}  // namespace

TEST_CASE("PLProfile arithmetic and slope scans") {
    PLProfile a = PLProfile::from_points({Rat(0), rat(1, 4), Rat(1)},
                                         {Rat(0), Rat(0), rat(3, 2)});
    CHECK(a.value_at(rat(1, 2)) == rat(1, 2));
    CHECK(a.left_slope_at(rat(1, 4)) == Rat(0));
    CHECK(a.right_slope_at(rat(1, 4)) == Rat(2));
    CHECK(a.kinks() == std::vector<Rat>{rat(1, 4)});

    PLProfile b = PLProfile::constant(Rat(1), rat(1, 3));
    PLProfile sum = a + b;
    CHECK(sum.value_at(rat(1, 8)) == rat(1, 3));
    CHECK(sum.value_at(Rat(1)) == rat(3, 2) + rat(1, 3));
    CHECK(sum.kinks() == a.kinks());

    CHECK(a.scale(rat(2, 3)).value_at(Rat(1)) == Rat(1));
    CHECK(lambda_by_scan(a, Rat(2)) == rat(1, 4));
    CHECK(lambda_by_scan(b, Rat(1)) == Rat(1));
    CHECK(lambda_by_scan(b, Rat(0)) == Rat(0));
}

TEST_CASE("worked cover profile: zero then slope 2, kink at 1/4") {
    auto W = make_field(3, 1, 2, 48);
    CoverWorkspace ws(worked_cover(W), {});
    PLProfile prof = build_profile(ws);
    CHECK(prof.r_end() == Rat(1));
    CHECK(prof.kinks() == std::vector<Rat>{rat(1, 4)});
    CHECK(prof.value_at(rat(1, 4)) == Rat(0));
    CHECK(prof.value_at(rat(1, 8)) == Rat(0));
    CHECK(prof.value_at(rat(1, 2)) == rat(1, 2));
    CHECK(prof.value_at(Rat(1)) == rat(3, 2));
    CHECK(prof.left_slope_at(Rat(1)) == Rat(2));
    CHECK(lambda_by_scan(prof, Rat(2)) == rat(1, 4));
    // scan agrees with the closed form
    LambdaResult closed = lambda_closed_form(ws.analysis());
    CHECK(closed.value == lambda_by_scan(prof, Rat(closed.m)));
}

TEST_CASE("constant profile for alpha0 != 0 covers") {
    auto W = make_field(3, 1, 2, 48);
    CoverSpec c;
    c.ctx = W;
    c.alpha0 = 1;
    c.unit_u = LaurentSeries::one(W);
    c.r0 = Rat(1);
    CoverWorkspace ws(c, {});
    PLProfile prof = build_profile(ws);
    CHECK(prof.kinks().empty());
    CHECK(prof.value_at(rat(1, 3)) == rat(3, 2));
}

TEST_CASE("V-shaped profile from a unit part (decreasing then rising)") {
    auto W = make_field(3, 1, 2, 48);
    CoverSpec c = worked_cover(W);
    c.branch = {{Elem::from_integer(W, 3), 1}};
    LaurentSeries u = LaurentSeries::one(W);
    u.set_coeff(1, Elem::one(W));  // U = 1 + T
    c.unit_u = u;
    c.assume_connected = true;
    CoverWorkspace ws(c, {});
    PLProfile prof = build_profile(ws);
    // delta = max(3/2 - r, 1/2 + r): kink at r = 1/2, value 1
    CHECK(prof.kinks() == std::vector<Rat>{rat(1, 2)});
    CHECK(prof.value_at(rat(1, 2)) == Rat(1));
    CHECK(prof.left_slope_at(rat(1, 2)) == Rat(-1));
    CHECK(prof.right_slope_at(rat(1, 2)) == Rat(1));
    CHECK(prof.value_at(Rat(1)) == rat(3, 2));
    // duality check at the kink
    SwanValue v = ws.analysis().swan_at(rat(1, 2));
    auto fq = W->fq();
    CHECK(ws.analysis().left_slope_at(rat(1, 2)) ==
          v.form->ord_at(Place::infinity(fq)) + 1);
    CHECK(ws.analysis().right_slope_at(rat(1, 2)) ==
          -v.form->ord_at(Place::zero(fq)) - 1);
}

TEST_CASE("disk reports on the worked cover") {
    auto W = make_field(3, 1, 8, 48);
    CoverWorkspace ws(worked_cover(W), {});
    DiskReport at_half = closed_disk_at(ws, rat(1, 2));
    CHECK(at_half.branch_count_in_disk == 3);
    CHECK(at_half.left_slope == 2);
    CHECK(at_half.is_closed_disk);
    CHECK(at_half.residually_inseparable);
    REQUIRE(at_half.omega_criterion.has_value());
    CHECK(*at_half.omega_criterion);

    DiskReport at_eighth = closed_disk_at(ws, rat(1, 8));
    CHECK_FALSE(at_eighth.is_closed_disk);
    CHECK(at_eighth.left_slope == 0);
    CHECK_FALSE(at_eighth.residually_inseparable);
}

TEST_CASE("connectedness must be established somehow") {
    auto W = make_field(3, 1, 2, 48);
    CoverSpec c;
    c.ctx = W;
    c.alpha0 = 0;
    c.unit_u = LaurentSeries::one(W);
    c.r0 = Rat(1);  // no branch points at all, U = 1: depth 0 cover
    CoverWorkspace ws(c, {});
    CHECK_THROWS_AS((void)closed_disk_at(ws, rat(1, 2)), SwanError);
    c.assume_connected = true;
    CoverWorkspace ws2(c, {});
    // the claim is inconsistent: a trivial unbranched cover splits
    try {
        (void)closed_disk_at(ws2, rat(1, 2));
        CHECK(false);
    } catch (const SwanError& e) {
        CHECK(e.kind() == ErrorKind::AssumptionViolation);
    }
}

TEST_CASE("vanishing cycles on the worked cover at r = 1/2") {
    auto W = make_field(3, 1, 8, 48);
    CoverWorkspace ws(worked_cover(W), {});
    VcReport rep = vanishing_cycles_report(ws, rat(1, 2));
    REQUIRE_FALSE(rep.skipped_zero_depth);
    CHECK(rep.depth == rat(1, 2));
    // all three branch points specialize to t = 0; ord there is -3
    bool saw_zero_place = false;
    for (auto& pt : rep.points) {
        if (pt.place == Place::zero(W->fq())) {
            saw_zero_place = true;
            CHECK(pt.ord == -3);
            CHECK(pt.branch_above == 3);
            CHECK(pt.delta_y == Rat(0));
        }
    }
    CHECK(saw_zero_place);
    CHECK(rep.ord_infinity == 1);
    CHECK(rep.degree_sum == -2);
    CHECK(rep.smooth);
    CHECK(rep.closed_disk);
    CHECK(rep.smooth_matches_disk);
}

TEST_CASE("vanishing cycles skipped at zero depth") {
    auto W = make_field(3, 1, 8, 48);
    CoverWorkspace ws(worked_cover(W), {});
    VcReport rep = vanishing_cycles_report(ws, rat(1, 8));
    CHECK(rep.skipped_zero_depth);
}

TEST_CASE("vanishing cycles for a logarithmic cover") {
    auto W = make_field(3, 1, 2, 48);
    CoverSpec c;
    c.ctx = W;
    c.alpha0 = 1;
    c.unit_u = LaurentSeries::one(W);
    c.r0 = Rat(1);
    c.outside_branch_bound = 1;  // y^3 = T is also branched at infinity
    CoverWorkspace ws(c, {});
    VcReport rep = vanishing_cycles_report(ws, rat(1, 2));
    REQUIRE(rep.points.size() == 1);
    CHECK(rep.points[0].ord == -1);
    CHECK(rep.points[0].branch_above == 1);
    CHECK(rep.points[0].delta_y == Rat(0));
    CHECK(rep.smooth);
}

TEST_CASE("branch point on the boundary sphere specializes away from t = 0") {
    auto W = make_field(3, 1, 1, 48);
    CoverSpec c = worked_cover(W);
    // x = 3 and x = 24 have valuation 1 = r0: at r = 1 they specialize to
    // t = 1 and t = 2
    CoverWorkspace ws(c, {});
    VcReport rep = vanishing_cycles_report(ws, Rat(1));
    long branch_total = 0;
    for (auto& pt : rep.points) branch_total += pt.branch_above;
    CHECK(branch_total == 3);
    bool t0 = false, t1 = false, t2 = false;
    auto fq = W->fq();
    for (auto& pt : rep.points) {
        if (pt.place == Place::zero(fq)) t0 = pt.branch_above == 1;
        if (pt.place == Place::finite(FqPoly::t(fq) - FqPoly::constant(FqElem(fq, 1ul))))
            t1 = pt.branch_above == 1;
        if (pt.place == Place::finite(FqPoly::t(fq) - FqPoly::constant(FqElem(fq, 2ul))))
            t2 = pt.branch_above == 1;
    }
    CHECK(t0);
    CHECK(t1);
    CHECK(t2);
    CHECK(rep.degree_sum == -2);
}
