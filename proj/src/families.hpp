#ifndef SWANCOND_FAMILIES_HPP
#define SWANCOND_FAMILIES_HPP

#include <map>
#include <memory>
#include <string>

#include "towers.hpp"

namespace swancond {

struct FamilyMember {
    std::string id;
    std::optional<CoverSpec> cover;
    std::optional<TowerSpec> tower;
};

struct FamilySpec {
    FieldCtxPtr ctx;
    std::vector<FamilyMember> members;
    Rat s1 = Rat(1);  // connectedness radius, caller-supplied
    // Finalization computes s2 = min over members and branch points of
    // v(x_i), sets r0 = min(s1, s2), rewrites the member domains, and
    // rejects unequal branch counts.
    Rat s2;
    Rat r0;
    long shared_branch_count = 0;

    void finalize();
};

struct MemberEvaluation {
    Rat lambda;
    std::string method;  // "closed-form+scan" | "scan" | "closed-form"
    bool closed_form_ok = false;
    std::string closed_form_branch;
    bool cm_vanished = false;
};

struct MinimizerCertificate {
    Rat gamma;
    std::vector<std::string> argmin;  // sorted by member id
    std::map<std::string, MemberEvaluation> per_member;
};

class FamilyWorkspace {
  public:
    FamilyWorkspace(FamilySpec spec, AnalysisOptions opts = {});

    const FamilySpec& spec() const { return spec_; }
    const AnalysisOptions& options() const { return opts_; }
    std::size_t size() const { return spec_.members.size(); }
    CoverWorkspace* cover(std::size_t i) { return covers_[i].get(); }
    TowerWorkspace* tower(std::size_t i) { return towers_[i].get(); }
    long member_index(const std::string& id) const;

  private:
    FamilySpec spec_;
    AnalysisOptions opts_;
    std::vector<std::unique_ptr<CoverWorkspace>> covers_;
    std::vector<std::unique_ptr<TowerWorkspace>> towers_;
};

// Per-member lambda by the closed form where its preconditions hold, always
// cross-checked against the profile scan; the exact minimum over the family
// with its (nonempty) argmin.
MinimizerCertificate family_lambda(FamilyWorkspace& fw);

struct Witness {
    Rat r;
    std::string member_id;
};

struct WitnessCheck {
    Rat r;
    std::string member_id;
    bool closed_disk = false;
    bool lambda_below_radius = false;
};

struct KinkTheoremVerdict {
    MinimizerCertificate certificate;
    std::vector<WitnessCheck> witnesses;
    bool open_disk_certified = false;  // argmin closed-disk on the whole grid above gamma
    std::vector<Rat> verification_grid;
};

// Validates the witnesses (closed-disk preimage and lambda < r), then
// certifies the open-disk conclusion for every argmin member on an exact
// verification grid in (gamma, r0].  A failed witness raises WitnessInvalid;
// lambda >= r raises TheoremViolated (bug detector).
KinkTheoremVerdict kink_theorem_check(FamilyWorkspace& fw,
                                      const std::vector<Witness>& witnesses);

enum class DiffSwanMode { Diff, Swan };

struct DiffSwanEvaluation {
    Rat lambda;
    Rat target;                      // m_diff or m_swan
    std::vector<Rat> zero_depth_radii;  // sampled radii where the proxy failed
};

struct DiffSwanCertificate {
    Rat gamma;
    std::vector<std::string> argmin;
    std::map<std::string, DiffSwanEvaluation> per_member;
};

// lambda_diff / lambda_swan per member from the composed different or depth
// profile against the m_diff / m_swan target; towers must be all-p.
DiffSwanCertificate lambda_diff_swan(FamilyWorkspace& fw, DiffSwanMode mode);

}  // namespace swancond

#endif
