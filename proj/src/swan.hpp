#ifndef SWANCOND_SWAN_HPP
#define SWANCOND_SWAN_HPP

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "laurent.hpp"

namespace swancond {

struct BranchPoint {
    Elem x;      // v(x) > 0; distinct across the cover
    long alpha;  // multiplicity in 1..p-1
};

// A Z/p-cover of the open unit disk presented by the Kummer function
// F = U * T^alpha0 * prod (1 - x_i T^-1)^alpha_i with U a unit series.
struct CoverSpec {
    FieldCtxPtr ctx;
    long alpha0 = 0;
    std::vector<BranchPoint> branch;
    LaurentSeries unit_u;  // constant term 1, support in degrees >= 1
    long genus = 0;
    long outside_branch_bound = 0;
    Rat r0 = Rat(1);
    bool assume_connected = false;

    void validate() const;
    // T = 0 is a branch point iff its order alpha0 - sum(alpha_i) is prime to p.
    bool zero_is_branch() const;
    long branch_count_in_disk() const;  // |B[r]|, constant for r in (0, r0]
    LaurentSeries f_tilde_unit() const;  // prod (1 - x_i T^-1)^alpha_i, constant term 1
    CoverSpec embedded(const FieldEmbedding& emb) const;
};

enum class SwanRegime { ZeroDepth, ExactDifferential, Logarithmic };

struct SwanValue {
    Rat depth;
    std::optional<ResidueDifferential> form;  // present iff depth > 0
    SwanRegime regime;
};

enum class RootChoice { First, Last };

// Result of killing the coefficients in degrees p*d for the corrector
// degrees d: corrector I with constant term 1, remainder G - I^p.
struct EliminationResult {
    LaurentSeries corrector;
    LaurentSeries remainder;
    std::vector<long> corrector_degrees;
    std::vector<long> target_degrees;
    // Targets whose coefficient could not be pushed to the guard inside the
    // working field family (the corrector root lives in a different
    // extension): T-degree -> suggested (e, f) enlargement.  The remainder
    // keeps the best-achieved coefficient there.
    std::map<long, std::pair<long, long>> stalled;
    // c-valuations indexed the usual way: c_i is the coefficient of T^-i.
    Valuation c_valuation(long i) const { return remainder.coeff(-i).val_info(); }
};

// One-sided elimination: corrector supported in degrees 1..s (side T) or
// -1..-s (side T^-1).
EliminationResult eliminate(const LaurentSeries& G, long s, bool t_inverse_side,
                            RootChoice rc = RootChoice::First);
// General variant with an explicit corrector degree set (two-sided inputs).
EliminationResult eliminate_degrees(const LaurentSeries& G, std::vector<long> degrees,
                                    RootChoice rc = RootChoice::First);

struct AnalysisOptions {
    long ef_cap = 64;       // cap on e*f under automatic extensions
    long grid_cap = 12;     // dyadic refinement cap for profiles
    RootChoice rc = RootChoice::First;
};

// Radius-independent Swan data of one cover: eliminations are done once; the
// depth function, slopes, and forms are then exact queries.
class CoverAnalysis {
  public:
    CoverAnalysis(CoverSpec cover, AnalysisOptions opts);

    const CoverSpec& cover() const { return cover_; }
    const FieldCtxPtr& ctx() const { return cover_.ctx; }
    unsigned long p() const { return ctx()->p(); }
    Rat depth_cap() const { return rat(static_cast<long>(p()), static_cast<long>(p()) - 1); }
    const Rat& r0() const { return cover_.r0; }
    long branch_count() const { return branch_count_; }

    // Depth at any rational radius in (0, r0]; exact.
    Rat depth_at(const Rat& r) const;
    // Continuity limit of the depth at 0+ and the slope of the profile on
    // the first segment, computed from the exact line structure.
    std::pair<Rat, long> limit_at_zero() const;
    // One-sided slopes of the depth profile, exact integers.
    long left_slope_at(const Rat& r) const;
    long right_slope_at(const Rat& r) const;
    // Full Swan value including the differential form; needs e*r integral.
    SwanValue swan_at(const Rat& r) const;

    const std::optional<EliminationResult>& elim_u() const { return elim_u_; }
    const std::optional<EliminationResult>& elim_f() const { return elim_f_; }
    const std::map<long, std::pair<long, long>>& stalled_targets() const { return stalled_; }
    // c_i = coefficient of T^-i in the combined remainder.
    Valuation c_valuation(long i) const { return remainder_total_.coeff(-i).val_info(); }
    const LaurentSeries& remainder() const { return remainder_total_; }

  private:
    friend class CoverWorkspace;
    struct VrInfo {
        std::optional<Rat> exact_min;
        std::optional<Rat> hidden_floor;
        std::optional<Rat> stalled_floor;
        std::pair<long, long> stall_suggestion{1, 1};
        long min_degree = 0, max_degree = 0;  // extremes of the argmin degrees
    };
    VrInfo vr_info(const Rat& r) const;
    // True when a stalled target could strictly dominate at r; callers then
    // settle the query by the direct reduction test or request an extension.
    bool stall_relevant(const VrInfo& info) const;
    SwanValue resolve_stalled(const VrInfo& info, const Rat& r) const;
    void check_slope_unambiguous(const VrInfo& info) const;
    void check_radius(const Rat& r, bool need_reduction) const;

    CoverSpec cover_;
    AnalysisOptions opts_;
    long branch_count_ = 0;
    std::optional<EliminationResult> elim_u_, elim_f_;
    std::map<long, std::pair<long, long>> stalled_;
    LaurentSeries remainder_total_;  // R_U + R_Ftilde, disjoint supports
    LaurentSeries f_full_;           // U * T^alpha0 * f_tilde, for dlog reductions
};

// Analysis with automatic field extension: operations that raise
// ExtensionRequired rebuild the cover in the suggested extension, up to the
// e*f cap.
class CoverWorkspace {
  public:
    CoverWorkspace(CoverSpec cover, AnalysisOptions opts = {});

    const CoverAnalysis& analysis() const { return *analysis_; }
    const AnalysisOptions& options() const { return opts_; }

    // Runs fn(analysis); on ExtensionRequired, extends and retries.
    template <typename Fn>
    auto with_retry(Fn&& fn) -> decltype(fn(std::declval<const CoverAnalysis&>())) {
        for (int round = 0;; ++round) {
            try {
                return fn(*analysis_);
            } catch (const ExtensionRequiredError& e) {
                if (round >= 16)
                    throw_error(ErrorKind::ExtensionCapExceeded,
                                "extension retries exhausted");
                extend(e.e_mult(), e.f_mult());
            }
        }
    }

    // Ensures e*r is integral for every radius before running.
    void ensure_radius(const Rat& r);

  private:
    void extend(long e_mult, long f_mult);
    void rebuild();

    CoverSpec original_;
    CoverSpec current_;
    AnalysisOptions opts_;
    std::shared_ptr<CoverAnalysis> analysis_;
};

// Swan data of a raw Kummer series (used for products of covers and the
// cancellation fallback): F = U_side * F_side * T^t_exp with both series
// having constant term 1.
SwanValue swan_of_series(const LaurentSeries& u_side, const LaurentSeries& f_side,
                         long t_exp, const Rat& r, RootChoice rc = RootChoice::First);

// Same value computed through a single two-sided elimination of the full
// product; exercises the fallback path.
SwanValue swan_of_product_series(const LaurentSeries& full, long t_exp, const Rat& r,
                                 RootChoice rc = RootChoice::First);

// Auto-extending variants: rebuild in the suggested field extension and retry.
SwanValue swan_of_series_auto(const LaurentSeries& u_side, const LaurentSeries& f_side,
                              long t_exp, const Rat& r, AnalysisOptions opts = {});
SwanValue swan_of_product_series_auto(const LaurentSeries& full, long t_exp, const Rat& r,
                                      AnalysisOptions opts = {});

SwanValue swan_power_twist(const SwanValue& value, long m, unsigned long p);

// max over the index window of (v(c_m) - v(c_i))/(m - i), or +infinity when
// c_m vanishes at precision.
struct MuResult {
    bool infinite = false;
    Rat value;  // meaningful when not infinite
};
MuResult mu_invariant(const CoverAnalysis& analysis, long s_u, long m);

struct LambdaResult {
    Rat value;
    bool cm_vanished = false;     // the c_m = 0 branch fired
    std::string branch;           // which case of the closed form applied
    std::optional<MuResult> mu;
    long m = 0;
    long s_u = 0;
};
LambdaResult lambda_closed_form(const CoverAnalysis& analysis);

// If p divides a slope at nonzero depth, the depth must be p/(p-1) and the
// slope 0; anything else is an internal inconsistency.
void slope_divisibility_guard(const SwanValue& value, long slope, unsigned long p);

}  // namespace swancond

#endif
