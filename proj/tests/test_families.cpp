#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "families.hpp"

using namespace swancond;

namespace {

CoverSpec cover_with(FieldCtxPtr W, long x2) {
    CoverSpec c;
    c.ctx = W;
    c.alpha0 = 0;
    c.branch = {{Elem::from_integer(W, 3), 1}, {Elem::from_integer(W, x2), 1}};
    c.unit_u = LaurentSeries::one(W);
    c.r0 = Rat(1);
    return c;
}

FamilySpec worked_family(FieldCtxPtr W) {
    FamilySpec fam;
    fam.ctx = W;
    fam.s1 = Rat(1);
    fam.members.push_back({"a", cover_with(W, 24), std::nullopt});
    fam.members.push_back({"b", cover_with(W, 12), std::nullopt});
    return fam;
}

}  // namespace

TEST_CASE("family finalization computes r0 and validates branch counts") {
    auto W = make_field(3, 1, 16, 48);
    FamilySpec fam = worked_family(W);
    fam.finalize();
    CHECK(fam.s2 == Rat(1));
    CHECK(fam.r0 == Rat(1));
    CHECK(fam.members[0].cover->r0 == Rat(1));

    FamilySpec bad = worked_family(W);
    bad.members[1].cover->branch.push_back({Elem::from_integer(W, 9), 2});
    CHECK_THROWS_AS(bad.finalize(), SwanError);
}

TEST_CASE("worked two-member family: gamma 1/4, argmin a") {
    auto W = make_field(3, 1, 16, 48);
    FamilyWorkspace fw(worked_family(W), {});
    MinimizerCertificate cert = family_lambda(fw);
    CHECK(cert.gamma == rat(1, 4));
    CHECK(cert.argmin == std::vector<std::string>{"a"});
    CHECK(cert.per_member.at("a").lambda == rat(1, 4));
    CHECK(cert.per_member.at("b").lambda == Rat(1));
    CHECK(cert.per_member.at("a").method == "closed-form+scan");
}

TEST_CASE("singleton family") {
    auto W = make_field(3, 1, 16, 48);
    FamilySpec fam;
    fam.ctx = W;
    fam.s1 = Rat(1);
    fam.members.push_back({"only", cover_with(W, 24), std::nullopt});
    FamilyWorkspace fw(std::move(fam), {});
    MinimizerCertificate cert = family_lambda(fw);
    CHECK(cert.argmin == std::vector<std::string>{"only"});
}

TEST_CASE("family of constant-depth covers: lambda = r0 on every member") {
    auto W = make_field(3, 1, 2, 48);
    FamilySpec fam;
    fam.ctx = W;
    fam.s1 = Rat(1);
    for (long k = 0; k < 3; ++k) {
        CoverSpec c;
        c.ctx = W;
        c.alpha0 = 2;
        c.branch = {{Elem::from_integer(W, 3 * (k + 1)), 1}};
        c.unit_u = LaurentSeries::one(W);
        c.outside_branch_bound = 1;
        c.r0 = Rat(1);
        fam.members.push_back({std::string(1, static_cast<char>('a' + k)), c, std::nullopt});
    }
    FamilyWorkspace fw(std::move(fam), {});
    MinimizerCertificate cert = family_lambda(fw);
    CHECK(cert.gamma == Rat(1));
    CHECK(cert.argmin.size() == 3);
}

TEST_CASE("kink theorem check with valid witnesses certifies the open disk") {
    auto W = make_field(3, 1, 16, 48);
    FamilyWorkspace fw(worked_family(W), {});
    std::vector<Witness> ws = {{rat(1, 2), "a"}, {rat(3, 8), "a"}, {rat(5, 16), "a"}};
    KinkTheoremVerdict verdict = kink_theorem_check(fw, ws);
    CHECK(verdict.witnesses.size() == 3);
    for (auto& w : verdict.witnesses) {
        CHECK(w.closed_disk);
        CHECK(w.lambda_below_radius);
    }
    CHECK(verdict.open_disk_certified);
    CHECK_FALSE(verdict.verification_grid.empty());
    for (const Rat& r : verdict.verification_grid) CHECK(r > rat(1, 4));
}

TEST_CASE("kink theorem check rejects an invalid witness") {
    auto W = make_field(3, 1, 16, 48);
    FamilyWorkspace fw(worked_family(W), {});
    try {
        (void)kink_theorem_check(fw, {{rat(1, 8), "a"}});
        CHECK(false);
    } catch (const SwanError& e) {
        CHECK(e.kind() == ErrorKind::WitnessInvalid);
    }
}

TEST_CASE("empty witness list reduces to the certificate") {
    auto W = make_field(3, 1, 16, 48);
    FamilyWorkspace fw(worked_family(W), {});
    KinkTheoremVerdict verdict = kink_theorem_check(fw, {});
    CHECK_FALSE(verdict.open_disk_certified);
    CHECK(verdict.witnesses.empty());
    CHECK(verdict.certificate.gamma == rat(1, 4));
}

TEST_CASE("lambda_diff and lambda_swan coincide on a single Z/p member") {
    auto W = make_field(3, 1, 16, 48);
    FamilySpec fam;
    fam.ctx = W;
    fam.s1 = Rat(1);
    fam.members.push_back({"a", cover_with(W, 24), std::nullopt});
    FamilyWorkspace fw(std::move(fam), {});
    DiffSwanCertificate diff = lambda_diff_swan(fw, DiffSwanMode::Diff);
    CHECK(diff.per_member.at("a").target == rat(4, 3));
    CHECK(diff.per_member.at("a").lambda == rat(1, 4));

    FamilySpec fam2;
    fam2.ctx = W;
    fam2.s1 = Rat(1);
    fam2.members.push_back({"a", cover_with(W, 24), std::nullopt});
    FamilyWorkspace fw2(std::move(fam2), {});
    DiffSwanCertificate swan = lambda_diff_swan(fw2, DiffSwanMode::Swan);
    CHECK(swan.per_member.at("a").target == Rat(2));
    CHECK(swan.per_member.at("a").lambda == rat(1, 4));
    CHECK(diff.gamma == swan.gamma);
}

TEST_CASE("zero-profile tower member: lambda = r0 when the target is positive") {
    auto W = make_field(3, 1, 2, 48);
    FamilySpec fam;
    fam.ctx = W;
    fam.s1 = Rat(1);
    TowerSpec tower;
    tower.ctx = W;
    tower.r0 = Rat(1);
    AbstractStepData step;
    step.branch_count_in_disk = 3;
    step.berk_profile = PLProfile::constant(Rat(1), Rat(0));
    tower.steps.push_back({StepGroup::Zp, 0, std::nullopt, step});
    fam.members.push_back({"z", std::nullopt, tower});
    FamilyWorkspace fw(std::move(fam), {});
    DiffSwanCertificate cert = lambda_diff_swan(fw, DiffSwanMode::Diff);
    CHECK(cert.per_member.at("z").target == rat(4, 3));
    CHECK(cert.per_member.at("z").lambda == Rat(1));
    CHECK_FALSE(cert.per_member.at("z").zero_depth_radii.empty());
}
