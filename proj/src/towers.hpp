#ifndef SWANCOND_TOWERS_HPP
#define SWANCOND_TOWERS_HPP

#include <memory>
#include <optional>
#include <string>

#include "plprofile.hpp"
#include "profile.hpp"

namespace swancond {

enum class StepGroup { Zp, Zell };

// Data for a tower level given without a concrete cover: the branch count of
// that step inside the disk and its different profile, either directly in
// r-coordinates or in the level-local radius rho = (r - offset)/scale with
// scale = deg of the composed map below.
struct AbstractStepData {
    long branch_count_in_disk = 0;
    std::optional<PLProfile> berk_profile;
    std::optional<PLProfile> depth_profile;
    bool level_local = false;
    Rat radius_scale = Rat(1);
    Rat radius_offset = Rat(0);
};

struct TowerStep {
    StepGroup group = StepGroup::Zp;
    long ell = 0;  // prime order of a tame step
    std::optional<CoverSpec> cover;
    std::optional<AbstractStepData> abstract_data;
};

struct CharacterSpec {
    long order_exponent = 1;      // chi has order p^n
    long induction_exponent = 0;  // induced from a degree-1 character at index p^m
    bool subgroup_in_series = true;
};

struct TowerSpec {
    FieldCtxPtr ctx;
    std::vector<TowerStep> steps;  // bottom to top
    std::optional<CharacterSpec> character;
    Rat r0 = Rat(1);

    void validate() const;
    bool all_p_steps() const;
};

// ---- composition laws ----

// delta_chi = p/(p-1) * delta^Berk for a Z/p step; this is the inverse map.
PLProfile berk_from_depth(const PLProfile& depth, unsigned long p);
PLProfile depth_from_berk(const PLProfile& berk, unsigned long p);
// Pointwise sum of the step differents.
PLProfile compose_differents(const std::vector<PLProfile>& steps);
// delta_chi for a Z/p^2-type tower: berk(Z/X) + p/(p-1) * berk(Y/Z).
PLProfile cyclic_depth_from_berk(const PLProfile& berk_zx, const PLProfile& berk_yz,
                                 unsigned long p);
// delta_chi = sum c_i berk_i with c_1 = ... = c_{n-1} = p^m, c_n = p^(m+1)/(p-1).
PLProfile lin_combo_depth(const std::vector<PLProfile>& berk_steps, long m,
                          unsigned long p);

// Slope targets for closed-disk preimages.
Rat m_diff(const std::vector<long>& branch_counts, unsigned long p);
Rat m_swan(const std::vector<long>& branch_counts, unsigned long p, long m);
// Cyclic towers, counts indexed by branching index p^(n-s+1).
long m_swan_cyclic(const std::vector<long>& branch_by_index);
// Level counts from index counts: |B_i| = sum_{j<=i} |B^j| p^(j-1).
std::vector<long> level_counts_from_index_counts(const std::vector<long>& by_index,
                                                 unsigned long p);

// Z/ell covers of a disk: disk preimage iff exactly one branch point.
bool tame_disk_predicate(long branch_count_in_disk);
struct TameInvarianceReport {
    bool constant = false;
    long count = 0;
};
// Throws AssumptionViolation on mixed counts across a family.
TameInvarianceReport tame_invariance(const std::vector<long>& family_counts);

struct GroupEntry {
    enum class Kind { Cyclic, PExtension, SimpleNonabelian } kind;
    long order = 0;                 // Cyclic
    long p_part_order = 0;          // PExtension: order of the normal p-group
    long cyclic_quotient_order = 0; // PExtension: order of the tame quotient
};
// True iff every Galois group is an extension of a cyclic prime-to-p group
// by a p-group.
bool solvable_structure_check(const std::vector<GroupEntry>& groups, unsigned long p);

// Vanishing-cycles formula evaluator for n >= 2:
// 2 (delta_y - delta_z) / (p^(n-1)(p-1)) - 2 delta_x - branch_near.
Rat eval_e1(const Rat& delta_y, const Rat& delta_z, const Rat& delta_x, long branch_near,
            unsigned long p, long n);

// ---- tower evaluation ----

class TowerWorkspace {
  public:
    TowerWorkspace(TowerSpec spec, AnalysisOptions opts = {});

    const TowerSpec& spec() const { return spec_; }
    std::size_t step_count() const { return spec_.steps.size(); }
    long step_branch_count(std::size_t i) const;
    long step_degree(std::size_t i) const;  // p or ell
    // delta^Berk of step i as a function of r on (0, r0].
    const PLProfile& berk_step(std::size_t i);
    PLProfile composed_berk();
    CoverWorkspace* cover_workspace(std::size_t i);
    const AnalysisOptions& options() const { return opts_; }

  private:
    TowerSpec spec_;
    AnalysisOptions opts_;
    std::vector<std::optional<PLProfile>> berk_cache_;
    std::vector<std::unique_ptr<CoverWorkspace>> cover_ws_;
};

struct TowerLevelReport {
    std::size_t level = 0;  // 1-based
    StepGroup group = StepGroup::Zp;
    bool decided = false;
    bool closed_disk = false;
    std::string criterion;
};

struct TowerDiskReport {
    Rat r;
    std::string outcome;  // "closed-disk" | "not-closed-disk" | "refused"
    bool closed_disk = false;
    bool decided = false;
    long refused_from_level = 0;  // 1-based level whose failure stopped the walk, 0 if none
    std::vector<TowerLevelReport> levels;
    std::optional<Rat> m_diff_target;        // pure-p towers
    std::optional<Rat> composed_left_slope;  // of the composed different
    std::optional<bool> aggregate_matches;
    std::optional<Rat> m_swan_target;        // when a character is given
    std::optional<bool> swan_criterion_applicable;  // quotient-disk hypothesis held
};

// Walks the composition series level by level; a failed level refuses the
// decision for everything above it.
TowerDiskReport tower_disk_decision(TowerWorkspace& tw, const Rat& r);

}  // namespace swancond

#endif
