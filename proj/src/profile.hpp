#ifndef SWANCOND_PROFILE_HPP
#define SWANCOND_PROFILE_HPP

#include <optional>
#include <string>

#include "plprofile.hpp"
#include "swan.hpp"

namespace swancond {

// Exact depth profile r -> delta(r) on (0, r0].  Samples the analysis on a
// dyadic grid, attaches exact one-sided slopes, and solves for kink radii as
// intersections of adjacent segment lines; every located kink is confirmed
// by an exact depth query at the intersection radius.
PLProfile build_profile(CoverWorkspace& ws);

// Largest breakpoint-determined radius with left slope < m, else 0.
Rat lambda_by_scan(const PLProfile& profile, const Rat& m);

struct DiskReport {
    Rat r;
    long branch_count_in_disk = 0;
    long left_slope = 0;
    Rat depth;
    bool residually_inseparable = false;
    bool is_closed_disk = false;
    std::string criterion_used;
    // ord_inf(omega) == |B[r]| - 2, evaluated whenever the form exists.
    std::optional<bool> omega_criterion;
};

DiskReport closed_disk_at(CoverWorkspace& ws, const Rat& r);

struct VcPoint {
    Place place;
    long ord = 0;
    long branch_above = 0;
    Rat delta_y;
};

struct VcReport {
    Rat r;
    Rat depth;
    bool skipped_zero_depth = false;
    std::vector<VcPoint> points;
    long ord_infinity = 0;
    Rat ord_infinity_lower_bound;
    long degree_sum = 0;
    bool smooth = false;          // all finite delta_y vanish
    bool closed_disk = false;     // from the slope criterion
    bool smooth_matches_disk = false;
};

VcReport vanishing_cycles_report(CoverWorkspace& ws, const Rat& r);

}  // namespace swancond

#endif
