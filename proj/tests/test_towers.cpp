#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "towers.hpp"

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

TEST_CASE("berk scaling and its inverse") {
    PLProfile depth = PLProfile::constant(Rat(1), rat(3, 2));
    PLProfile berk = berk_from_depth(depth, 3);
    CHECK(berk.value_at(rat(1, 2)) == Rat(1));
    CHECK(depth_from_berk(berk, 3) == depth);

    PLProfile worked = PLProfile::from_points({Rat(0), rat(1, 4), Rat(1)},
                                              {Rat(0), Rat(0), rat(3, 2)});
    PLProfile wb = berk_from_depth(worked, 3);
    CHECK(wb.value_at(Rat(1)) == Rat(1));
    CHECK(wb.left_slope_at(Rat(1)) == rat(4, 3));
    CHECK(berk_from_depth(PLProfile::constant(Rat(1), Rat(0)), 3) ==
          PLProfile::constant(Rat(1), Rat(0)));
}

TEST_CASE("composition of differents") {
    PLProfile a = PLProfile::constant(Rat(1), rat(1, 2));
    PLProfile b = PLProfile::constant(Rat(1), rat(1, 3));
    PLProfile zero = PLProfile::constant(Rat(1), Rat(0));
    CHECK(compose_differents({zero, zero}) == zero);
    CHECK(compose_differents({a, b}).value_at(rat(1, 2)) == rat(5, 6));
    PLProfile worked = PLProfile::from_points({Rat(0), rat(1, 4), Rat(1)},
                                              {Rat(0), Rat(0), Rat(1)});
    CHECK(compose_differents({worked, zero}) == worked);
    // associativity and commutativity
    CHECK(compose_differents({compose_differents({a, b}), worked}) ==
          compose_differents({a, compose_differents({b, worked})}));
    CHECK(compose_differents({b, a}) == compose_differents({a, b}));
}

TEST_CASE("cyclic depth formula and the linear combination agree at n = 2") {
    PLProfile zx = PLProfile::constant(Rat(1), rat(1, 2));
    PLProfile yz = PLProfile::constant(Rat(1), rat(1, 3));
    PLProfile chi = cyclic_depth_from_berk(zx, yz, 3);
    CHECK(chi.value_at(rat(1, 2)) == Rat(1));
    CHECK(chi == lin_combo_depth({zx, yz}, 0, 3));
    CHECK(cyclic_depth_from_berk(zx, PLProfile::constant(Rat(1), Rat(0)), 3) == zx);

    // randomized cross-check on piecewise profiles
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        auto rnd_profile = [&]() {
            Rat mid = rat(1 + static_cast<long>(rng() % 6), 8);
            Rat v0 = rat(static_cast<long>(rng() % 5), 6);
            Rat v1 = v0 + rat(static_cast<long>(rng() % 5), 6);
            Rat v2 = v1 + rat(static_cast<long>(rng() % 5), 6);
            return PLProfile::from_points({Rat(0), mid, Rat(1)}, {v0, v1, v2});
        };
        PLProfile p1 = rnd_profile(), p2 = rnd_profile();
        CHECK(cyclic_depth_from_berk(p1, p2, 3) == lin_combo_depth({p1, p2}, 0, 3));
    }
    // n = 1, m = 0 reduces to the inverse of berk_from_depth
    CHECK(lin_combo_depth({zx}, 0, 3) == depth_from_berk(zx, 3));
}

TEST_CASE("m_diff and m_swan formulas") {
    CHECK(m_diff({3}, 3) == rat(4, 3));
    CHECK(m_diff({1}, 3) == Rat(0));
    CHECK(m_diff({1, 3}, 3) == rat(4, 9));
    CHECK(m_swan({5}, 3, 0) == Rat(4));
    CHECK(m_swan({1, 1}, 3, 0) == Rat(0));
    CHECK(m_swan_cyclic({2, 1}) == 2);
    CHECK(m_swan_cyclic({1, 0}) == 0);
    CHECK(level_counts_from_index_counts({1, 0}, 3) == std::vector<long>{1, 1});
}

TEST_CASE("cyclic m_swan identity on random index vectors") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        unsigned long p = trial % 2 ? 2 : 3;
        long n = 1 + static_cast<long>(rng() % 4);
        std::vector<long> by_index(n);
        by_index[0] = 1 + static_cast<long>(rng() % 4);  // at least one point fully branched
        for (long i = 1; i < n; ++i) by_index[i] = static_cast<long>(rng() % 4);
        std::vector<long> levels = level_counts_from_index_counts(by_index, p);
        CHECK(Rat(m_swan_cyclic(by_index)) == m_swan(levels, p, 0));
    }
}

TEST_CASE("tame predicates") {
    CHECK(tame_disk_predicate(1));
    CHECK_FALSE(tame_disk_predicate(2));
    CHECK(tame_invariance({2, 2, 2}).constant);
    CHECK_THROWS_AS((void)tame_invariance({1, 2}), SwanError);
}

TEST_CASE("solvable structure predicate") {
    std::vector<GroupEntry> cyclic_tower{
        {GroupEntry::Kind::Cyclic, 9, 0, 0},
        {GroupEntry::Kind::Cyclic, 5, 0, 0},
    };
    CHECK(solvable_structure_check(cyclic_tower, 3));
    std::vector<GroupEntry> ext{{GroupEntry::Kind::PExtension, 0, 27, 2}};
    CHECK(solvable_structure_check(ext, 3));
    std::vector<GroupEntry> bad_ext{{GroupEntry::Kind::PExtension, 0, 12, 2}};
    CHECK_FALSE(solvable_structure_check(bad_ext, 3));
    std::vector<GroupEntry> simple{{GroupEntry::Kind::SimpleNonabelian, 60, 0, 0}};
    CHECK_FALSE(solvable_structure_check(simple, 3));
}

TEST_CASE("vanishing-cycles formula evaluator") {
    CHECK(eval_e1(Rat(0), Rat(0), Rat(0), 1, 3, 2) == Rat(-1));
    CHECK(eval_e1(Rat(5), Rat(5), Rat(0), 0, 3, 2) == Rat(0));
    CHECK(eval_e1(Rat(3), Rat(0), Rat(0), 2, 3, 2) == Rat(-1));
}

TEST_CASE("tower decision: single worked Z/p step") {
    auto W = make_field(3, 1, 2, 48);
    TowerSpec spec;
    spec.ctx = W;
    spec.r0 = Rat(1);
    spec.steps.push_back({StepGroup::Zp, 0, worked_cover(W), std::nullopt});
    TowerWorkspace tw(spec, {});
    TowerDiskReport rep = tower_disk_decision(tw, rat(1, 2));
    CHECK(rep.closed_disk);
    CHECK(rep.outcome == "closed-disk");
    REQUIRE(rep.m_diff_target.has_value());
    CHECK(*rep.m_diff_target == rat(4, 3));
    CHECK(*rep.composed_left_slope == rat(4, 3));
    CHECK(*rep.aggregate_matches);

    TowerDiskReport rep2 = tower_disk_decision(tw, rat(1, 8));
    CHECK_FALSE(rep2.closed_disk);
    CHECK(rep2.outcome == "not-closed-disk");
}

TEST_CASE("tower decision: tame bottom step with two branch points refuses above") {
    auto W = make_field(3, 1, 2, 48);
    TowerSpec spec;
    spec.ctx = W;
    spec.r0 = Rat(1);
    AbstractStepData tame;
    tame.branch_count_in_disk = 2;
    spec.steps.push_back({StepGroup::Zell, 2, std::nullopt, tame});
    AbstractStepData top;
    top.branch_count_in_disk = 1;
    top.berk_profile = PLProfile::constant(Rat(1), Rat(0));
    spec.steps.push_back({StepGroup::Zp, 0, std::nullopt, top});
    TowerWorkspace tw(spec, {});
    TowerDiskReport rep = tower_disk_decision(tw, rat(1, 2));
    CHECK(rep.outcome == "refused");
    CHECK(rep.refused_from_level == 1);
    CHECK_FALSE(rep.levels[1].decided);
}

TEST_CASE("tower decision: Z/p over the worked cover with a matching second level") {
    auto W = make_field(3, 1, 2, 48);
    TowerSpec spec;
    spec.ctx = W;
    spec.r0 = Rat(1);
    spec.steps.push_back({StepGroup::Zp, 0, worked_cover(W), std::nullopt});
    AbstractStepData top;
    top.branch_count_in_disk = 3;
    // target level-2 slope is (p-1)(|B_2|-1)/p^2 = 4/9 beyond the kink
    top.berk_profile = PLProfile::from_points({Rat(0), rat(1, 4), Rat(1)},
                                              {Rat(0), Rat(0), rat(1, 3)});
    spec.steps.push_back({StepGroup::Zp, 0, std::nullopt, top});
    spec.character = CharacterSpec{2, 0, true};
    TowerWorkspace tw(spec, {});

    TowerDiskReport rep = tower_disk_decision(tw, rat(1, 2));
    CHECK(rep.closed_disk);
    CHECK(rep.levels[0].criterion == "left-slope");
    CHECK(rep.levels[1].criterion == "different-slope");
    REQUIRE(rep.m_diff_target.has_value());
    CHECK(*rep.m_diff_target == rat(4, 3) + rat(4, 9));
    CHECK(*rep.aggregate_matches);
    REQUIRE(rep.m_swan_target.has_value());
    CHECK(*rep.m_swan_target == rat(4, 3) + Rat(2) / Rat(3));  // 2*2/3 + 2/3
    CHECK(rep.swan_criterion_applicable.has_value());
    CHECK(*rep.swan_criterion_applicable);

    TowerDiskReport small = tower_disk_decision(tw, rat(1, 8));
    CHECK_FALSE(small.closed_disk);
    CHECK(small.refused_from_level == 1);
}

TEST_CASE("level-local profiles rescale slopes by the degree below") {
    auto W = make_field(3, 1, 2, 48);
    TowerSpec spec;
    spec.ctx = W;
    spec.r0 = Rat(1);
    spec.steps.push_back({StepGroup::Zp, 0, worked_cover(W), std::nullopt});
    AbstractStepData top;
    top.branch_count_in_disk = 3;
    top.level_local = true;
    top.radius_scale = Rat(3);  // deg of the level below
    top.radius_offset = Rat(0);
    // rho = r/3: a local kink at rho = 1/12 with slope 4/3 appears at
    // r = 1/4 with slope 4/9
    top.berk_profile = PLProfile::from_points({Rat(0), rat(1, 12), rat(1, 3)},
                                              {Rat(0), Rat(0), rat(1, 3)});
    spec.steps.push_back({StepGroup::Zp, 0, std::nullopt, top});
    TowerWorkspace tw(spec, {});
    const PLProfile& converted = tw.berk_step(1);
    CHECK(converted.left_slope_at(rat(1, 2)) == rat(4, 9));
    CHECK(converted.kinks() == std::vector<Rat>{rat(1, 4)});
}
