#include "profile.hpp"

#include <algorithm>

namespace swancond {

namespace {

struct SampleNode {
    Rat r;
    Rat value;
    long left = 0, right = 0;
};

struct Assembler {
    const CoverAnalysis& an;
    long depth_cap_levels;
    std::vector<std::pair<Rat, Rat>> points;  // breakpoints with values

    SampleNode probe(const Rat& r) const {
        SampleNode n;
        n.r = r;
        n.value = an.depth_at(r);
        n.left = an.left_slope_at(r);
        n.right = r < an.r0() ? an.right_slope_at(r) : n.left;
        return n;
    }

    void emit(const Rat& r, const Rat& v) { points.emplace_back(r, v); }

    void assemble(const SampleNode& a, const SampleNode& b, long level) {
        Rat run = b.r - a.r;
        Rat expected = a.value + Rat(a.right) * run;
        if (a.right == b.left && expected == b.value) {
            emit(b.r, b.value);
            return;
        }
        if (a.right != b.left) {
            // exact kink radius: intersection of the two segment lines
            Rat rstar = (b.value - Rat(b.left) * b.r - a.value + Rat(a.right) * a.r) /
                        Rat(a.right - b.left);
            if (rstar > a.r && rstar < b.r) {
                Rat vstar = a.value + Rat(a.right) * (rstar - a.r);
                Rat vstar_b = b.value - Rat(b.left) * (b.r - rstar);
                if (vstar == vstar_b && an.depth_at(rstar) == vstar) {
                    emit(rstar, vstar);
                    emit(b.r, b.value);
                    return;
                }
            }
        }
        if (level >= depth_cap_levels)
            throw_error(ErrorKind::GridTooCoarse,
                        "profile refinement cap exceeded between samples");
        Rat mid = (a.r + b.r) / 2;
        SampleNode m = probe(mid);
        assemble(a, m, level + 1);
        assemble(m, b, level + 1);
    }
};

PLProfile build_profile_impl(const CoverAnalysis& an, const AnalysisOptions& opts) {
    const Rat r0 = an.r0();
    if (an.cover().alpha0 != 0) return PLProfile::constant(r0, an.depth_cap());

    Assembler as{an, opts.grid_cap, {}};
    auto [v0, s0] = an.limit_at_zero();
    SampleNode anchor{Rat(0), v0, s0, s0};
    as.emit(Rat(0), v0);

    // initial grid: multiples of 1/(e 2^j) inside (0, r0], always including r0
    long e = static_cast<long>(an.ctx()->e());
    std::vector<Rat> grid;
    long j = 0;
    do {
        grid.clear();
        Rat step = Rat(1) / (e * (1l << j));
        for (Rat r = step; r < r0; r += step) grid.push_back(r);
        grid.push_back(r0);
        ++j;
    } while (grid.size() < 4 && j <= opts.grid_cap);

    SampleNode prev = anchor;
    for (const Rat& r : grid) {
        SampleNode cur = as.probe(r);
        as.assemble(prev, cur, 0);
        prev = cur;
    }

    std::vector<Rat> breaks, values;
    for (auto& [r, v] : as.points) {
        breaks.push_back(r);
        values.push_back(v);
    }
    PLProfile profile = PLProfile::from_points(std::move(breaks), std::move(values));
    if (!profile.nonnegative())
        throw_error(ErrorKind::InternalInconsistency, "depth profile dipped below zero");
    for (std::size_t i = 0; i < profile.segment_count(); ++i)
        if (!is_integer(profile.segment_slope(i)))
            throw_error(ErrorKind::InternalInconsistency,
                        "single-cover profile has a non-integer slope");
    return profile;
}

}  // namespace

PLProfile build_profile(CoverWorkspace& ws) {
    return ws.with_retry(
        [&](const CoverAnalysis& an) { return build_profile_impl(an, ws.options()); });
}

Rat lambda_by_scan(const PLProfile& profile, const Rat& m) {
    return profile.largest_radius_with_left_slope_below(m);
}

namespace {

bool connectedness_established(const CoverAnalysis& an, const Rat& r, const Rat& depth) {
    if (an.cover().assume_connected) return true;
    if (depth > 0) return true;  // a residually inseparable cover is connected
    if (an.cover().zero_is_branch()) return true;  // the origin lies in every D(r)
    for (auto& bp : an.cover().branch) {
        auto v = bp.x.valuation();
        if (v && *v > r) return true;
    }
    return false;
}

DiskReport disk_report_impl(const CoverAnalysis& an, const Rat& r) {
    DiskReport rep;
    rep.r = r;
    rep.branch_count_in_disk = an.branch_count();
    rep.depth = an.depth_at(r);
    rep.residually_inseparable = rep.depth > 0;
    if (!connectedness_established(an, r, rep.depth))
        throw_error(ErrorKind::ConnectednessNotEstablished,
                    "no branch point inside D(r): caller must assert connectedness");
    rep.left_slope = an.left_slope_at(r);
    long bound = rep.branch_count_in_disk - 1;
    if (rep.left_slope > bound) {
        // an unbranched cover with zero depth splits, so a connectedness
        // claim that forced us here is wrong input, not a library bug
        if (rep.branch_count_in_disk == 0 && rep.depth == 0)
            throw_error(ErrorKind::AssumptionViolation,
                        "connectedness was asserted, but an unbranched cover with zero "
                        "depth splits into p disks");
        throw_error(ErrorKind::InternalInconsistency,
                    "left slope exceeds the universal bound |B[r]| - 1");
    }
    rep.is_closed_disk = rep.left_slope == bound;
    rep.criterion_used = "left-slope";
    if (rep.depth > 0) {
        SwanValue v = an.swan_at(r);
        long ord_inf = v.form->ord_at(Place::infinity(an.ctx()->fq()));
        rep.omega_criterion = ord_inf == rep.branch_count_in_disk - 2;
        if (*rep.omega_criterion != rep.is_closed_disk)
            throw_error(ErrorKind::InternalInconsistency,
                        "slope and differential disk criteria disagree");
    }
    return rep;
}

}  // namespace

DiskReport closed_disk_at(CoverWorkspace& ws, const Rat& r) {
    ws.ensure_radius(r);
    return ws.with_retry([&](const CoverAnalysis& an) { return disk_report_impl(an, r); });
}

VcReport vanishing_cycles_report(CoverWorkspace& ws, const Rat& r) {
    ws.ensure_radius(r);
    return ws.with_retry([&](const CoverAnalysis& an) {
        VcReport rep;
        rep.r = r;
        const unsigned long p = an.p();
        SwanValue value = an.swan_at(r);
        rep.depth = value.depth;
        if (value.depth == 0) {
            rep.skipped_zero_depth = true;
            return rep;
        }
        const ResidueDifferential& omega = *value.form;
        auto fq = an.ctx()->fq();

        // specializations of the branch points to residue places
        std::vector<std::pair<Place, long>> branch_above;
        auto bump = [&](const Place& pl) {
            for (auto& [q, n] : branch_above)
                if (q == pl) {
                    ++n;
                    return;
                }
            branch_above.emplace_back(pl, 1);
        };
        if (an.cover().zero_is_branch()) bump(Place::zero(fq));
        long er = static_cast<long>(
            Rat(r * static_cast<long>(an.ctx()->e())).get_num().get_si());
        for (auto& bp : an.cover().branch) {
            Rat v = *bp.x.valuation();
            if (v > r) {
                bump(Place::zero(fq));
            } else {
                // v == r: the specialization is the residue of x p^-r
                FqElem cbar = bp.x.scale_pi(-er).residue();
                bump(Place::finite(FqPoly::t(fq) - FqPoly::constant(cbar)));
            }
        }

        // all finite places carrying a zero/pole of omega or a branch point
        std::vector<Place> places;
        auto want = [&](const Place& pl) {
            for (auto& q : places)
                if (q == pl) return;
            places.push_back(pl);
        };
        for (auto& [pl, ord] : omega.divisor())
            if (pl.kind == Place::Kind::Finite) want(pl);
        for (auto& [pl, n] : branch_above) want(pl);

        bool smooth = true;
        for (auto& pl : places) {
            VcPoint pt;
            pt.place = pl;
            pt.ord = omega.ord_at(pl);
            for (auto& [q, n] : branch_above)
                if (q == pl) pt.branch_above = n;
            pt.delta_y = Rat(static_cast<long>(p) - 1) * Rat(pt.ord + pt.branch_above) / 2;
            if (!is_integer(pt.delta_y) || pt.delta_y < 0)
                throw_error(ErrorKind::InternalInconsistency,
                            "vanishing-cycles point invariant is not a nonnegative integer");
            if (pt.delta_y != 0) smooth = false;
            rep.points.push_back(std::move(pt));
        }

        rep.ord_infinity = omega.ord_at(Place::infinity(fq));
        rep.ord_infinity_lower_bound =
            -rat(2 * static_cast<long>(p) * an.cover().genus, static_cast<long>(p) - 1) -
            an.cover().outside_branch_bound;
        if (Rat(rep.ord_infinity) < rep.ord_infinity_lower_bound)
            throw_error(ErrorKind::InternalInconsistency,
                        "ord at infinity violates the genus/branch lower bound");
        rep.degree_sum = omega.degree_check();
        rep.smooth = smooth;
        DiskReport disk = disk_report_impl(an, r);
        rep.closed_disk = disk.is_closed_disk;
        rep.smooth_matches_disk = rep.smooth == rep.closed_disk;
        if (!rep.smooth_matches_disk)
            throw_error(ErrorKind::InternalInconsistency,
                        "smoothness summary disagrees with the disk criterion");
        return rep;
    });
}

}  // namespace swancond
