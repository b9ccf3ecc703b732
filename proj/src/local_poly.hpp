#ifndef SWANCOND_LOCAL_POLY_HPP
#define SWANCOND_LOCAL_POLY_HPP

#include <optional>
#include <vector>

#include "local_field.hpp"

namespace swancond {

// Dense univariate polynomial over W, coefficient i of x^i.
using LPoly = std::vector<Elem>;

Elem lpoly_eval(const LPoly& poly, const Elem& x);
LPoly lpoly_derivative(const LPoly& poly);
LPoly lpoly_shift(const LPoly& poly, const Elem& c);     // poly(c + x)
LPoly lpoly_scale_arg(const LPoly& poly, long pi_shift);  // poly(pi^shift * x)

struct RootSearchResult {
    std::vector<Elem> roots;  // deterministic order (Elem::order_before)
    // Minimal suggested enlargement when some roots live in an extension.
    std::optional<std::pair<long, long>> extension_needed;  // (e_mult, f_mult)
    // Best in-field approximations to roots that live outside W (fractional
    // Newton-polygon slopes or irreducible residual factors): the points
    // where the descent stalled.
    std::vector<Elem> approaches;

    void note_extension(long e_mult, long f_mult);
};

// All roots of poly in W to working precision, by Newton-polygon segment
// splitting and Hensel lifting.  Roots needing a field extension are
// reported via extension_needed rather than silently dropped.  Every
// returned root r satisfies v(poly(r)) >= guard.
RootSearchResult find_roots(const LPoly& poly);

}  // namespace swancond

#endif
