#include "towers.hpp"

#include <algorithm>

namespace swancond {

void TowerSpec::validate() const {
    if (steps.empty()) throw_error(ErrorKind::Schema, "tower needs at least one step");
    if (r0 <= 0) throw_error(ErrorKind::Schema, "tower r0 must be positive");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const TowerStep& st = steps[i];
        if (st.group == StepGroup::Zell) {
            if (!ctx || st.ell < 2 || st.ell == static_cast<long>(ctx->p()))
                throw_error(ErrorKind::Schema, "tame step needs a prime order ell != p");
            bool prime = true;
            for (long d = 2; d * d <= st.ell; ++d)
                if (st.ell % d == 0) prime = false;
            if (!prime) throw_error(ErrorKind::Schema, "tame step order must be prime");
            if (!st.abstract_data)
                throw_error(ErrorKind::Schema, "tame steps carry abstract branch data");
        } else {
            if (!st.cover && !st.abstract_data)
                throw_error(ErrorKind::Schema, "each Z/p step needs a cover or abstract data");
            if (st.cover && i != 0)
                throw_error(ErrorKind::Schema,
                            "concrete covers are supported at the bottom level only; "
                            "higher levels take abstract profile data");
        }
        if (st.abstract_data && st.abstract_data->branch_count_in_disk < 0)
            throw_error(ErrorKind::Schema, "negative branch count");
    }
    if (character) {
        if (character->order_exponent < 1 || character->induction_exponent < 0)
            throw_error(ErrorKind::Schema, "bad character exponents");
        if (!character->subgroup_in_series)
            throw_error(ErrorKind::SeriesMismatch,
                        "the composition series must include the inducing subgroup");
        long n_p_steps = 0;
        for (auto& st : steps)
            if (st.group == StepGroup::Zp) ++n_p_steps;
        if (character->order_exponent != n_p_steps)
            throw_error(ErrorKind::SeriesMismatch,
                        "character order exponent must match the number of Z/p steps");
    }
}

bool TowerSpec::all_p_steps() const {
    return std::all_of(steps.begin(), steps.end(),
                       [](const TowerStep& s) { return s.group == StepGroup::Zp; });
}

PLProfile berk_from_depth(const PLProfile& depth, unsigned long p) {
    return depth.scale(rat(static_cast<long>(p) - 1, static_cast<long>(p)));
}

PLProfile depth_from_berk(const PLProfile& berk, unsigned long p) {
    return berk.scale(rat(static_cast<long>(p), static_cast<long>(p) - 1));
}

PLProfile compose_differents(const std::vector<PLProfile>& steps) {
    if (steps.empty()) throw_error(ErrorKind::DomainMismatch, "nothing to compose");
    PLProfile total = steps.front();
    for (std::size_t i = 1; i < steps.size(); ++i) total = total + steps[i];
    return total;
}

PLProfile cyclic_depth_from_berk(const PLProfile& berk_zx, const PLProfile& berk_yz,
                                 unsigned long p) {
    return berk_zx + berk_yz.scale(rat(static_cast<long>(p), static_cast<long>(p) - 1));
}

PLProfile lin_combo_depth(const std::vector<PLProfile>& berk_steps, long m, unsigned long p) {
    if (berk_steps.empty()) throw_error(ErrorKind::SeriesMismatch, "empty composition series");
    Rat pm(1);
    for (long i = 0; i < m; ++i) pm *= static_cast<long>(p);
    PLProfile total = berk_steps.front().scale(berk_steps.size() == 1
                                                   ? pm * rat(static_cast<long>(p),
                                                              static_cast<long>(p) - 1)
                                                   : pm);
    for (std::size_t i = 1; i < berk_steps.size(); ++i) {
        bool last = i + 1 == berk_steps.size();
        Rat c = last ? pm * rat(static_cast<long>(p), static_cast<long>(p) - 1) : pm;
        total = total + berk_steps[i].scale(c);
    }
    return total;
}

Rat m_diff(const std::vector<long>& branch_counts, unsigned long p) {
    Rat total(0);
    Rat power(1);
    for (long count : branch_counts) {
        power *= static_cast<long>(p);
        total += rat(static_cast<long>(p) - 1, 1) * Rat(count - 1) / power;
    }
    return total;
}

Rat m_swan(const std::vector<long>& branch_counts, unsigned long p, long m) {
    if (branch_counts.empty()) throw_error(ErrorKind::Schema, "empty branch count list");
    Rat total(0);
    Rat power(1);
    long n = static_cast<long>(branch_counts.size());
    for (long i = 1; i <= n - 1; ++i) {
        power *= static_cast<long>(p);
        total += Rat(static_cast<long>(p) - 1) * Rat(branch_counts[i - 1] - 1) / power;
    }
    // last level enters with 1/p^(n-1)
    Rat plast(1);
    for (long i = 0; i < n - 1; ++i) plast *= static_cast<long>(p);
    total += Rat(branch_counts[n - 1] - 1) / plast;
    Rat pm(1);
    for (long i = 0; i < m; ++i) pm *= static_cast<long>(p);
    return pm * total;
}

long m_swan_cyclic(const std::vector<long>& branch_by_index) {
    long total = 0;
    for (long c : branch_by_index) total += c;
    return total - 1;
}

std::vector<long> level_counts_from_index_counts(const std::vector<long>& by_index,
                                                 unsigned long p) {
    std::vector<long> levels(by_index.size(), 0);
    long power = 1;
    long acc = 0;
    for (std::size_t j = 0; j < by_index.size(); ++j) {
        acc += by_index[j] * power;
        levels[j] = acc;
        power *= static_cast<long>(p);
    }
    return levels;
}

bool tame_disk_predicate(long branch_count_in_disk) { return branch_count_in_disk == 1; }

TameInvarianceReport tame_invariance(const std::vector<long>& family_counts) {
    if (family_counts.empty())
        throw_error(ErrorKind::Schema, "empty family in the invariance check");
    for (long c : family_counts)
        if (c != family_counts.front())
            throw_error(ErrorKind::AssumptionViolation,
                        "branch counts vary across the family; the running assumption "
                        "requires a constant count");
    return {true, family_counts.front()};
}

bool solvable_structure_check(const std::vector<GroupEntry>& groups, unsigned long p) {
    for (const GroupEntry& g : groups) {
        switch (g.kind) {
            case GroupEntry::Kind::Cyclic:
                if (g.order < 1) return false;
                break;  // cyclic = (prime-to-p part) extended by its p-part
            case GroupEntry::Kind::PExtension: {
                long q = g.p_part_order;
                while (q > 1 && q % static_cast<long>(p) == 0) q /= static_cast<long>(p);
                if (q != 1) return false;
                if (g.cyclic_quotient_order < 1 ||
                    g.cyclic_quotient_order % static_cast<long>(p) == 0)
                    return false;
                break;
            }
            case GroupEntry::Kind::SimpleNonabelian:
                return false;
        }
    }
    return true;
}

Rat eval_e1(const Rat& delta_y, const Rat& delta_z, const Rat& delta_x, long branch_near,
            unsigned long p, long n) {
    if (n < 2) throw_error(ErrorKind::Schema, "the n >= 2 formula needs n >= 2");
    Rat denom(1);
    for (long i = 0; i < n - 1; ++i) denom *= static_cast<long>(p);
    denom *= static_cast<long>(p) - 1;
    return Rat(2) * (delta_y - delta_z) / denom - Rat(2) * delta_x - branch_near;
}

// ---- tower evaluation ----

namespace {

PLProfile convert_level_local(const PLProfile& local, const Rat& scale, const Rat& offset,
                              const Rat& r0) {
    if (scale <= 0) throw_error(ErrorKind::Schema, "level-local radius scale must be positive");
    // rho = (r - offset)/scale; sample the local profile on the image of (0, r0]
    std::vector<Rat> breaks{Rat(0)};
    std::vector<Rat> values;
    auto rho_of = [&](const Rat& r) -> Rat { return (r - offset) / scale; };
    Rat rho0 = rho_of(Rat(0)), rho1 = rho_of(r0);
    if (rho0 < 0 || rho1 > local.r_end())
        throw_error(ErrorKind::DomainMismatch,
                    "level-local profile does not cover the requested radii");
    values.push_back(local.value_at(rho0));
    for (const Rat& b : local.breaks()) {
        Rat r = b * scale + offset;
        if (r > 0 && r < r0) {
            breaks.push_back(r);
            values.push_back(local.value_at(b));
        }
    }
    breaks.push_back(r0);
    values.push_back(local.value_at(rho1));
    return PLProfile::from_points(std::move(breaks), std::move(values));
}

}  // namespace

TowerWorkspace::TowerWorkspace(TowerSpec spec, AnalysisOptions opts)
    : spec_(std::move(spec)), opts_(opts) {
    spec_.validate();
    berk_cache_.resize(spec_.steps.size());
    cover_ws_.resize(spec_.steps.size());
    for (std::size_t i = 0; i < spec_.steps.size(); ++i) {
        if (spec_.steps[i].cover) {
            CoverSpec c = *spec_.steps[i].cover;
            if (c.r0 != spec_.r0)
                throw_error(ErrorKind::DomainMismatch, "step cover r0 differs from tower r0");
            cover_ws_[i] = std::make_unique<CoverWorkspace>(std::move(c), opts_);
        }
    }
}

long TowerWorkspace::step_branch_count(std::size_t i) const {
    const TowerStep& st = spec_.steps[i];
    if (st.cover) return cover_ws_[i]->analysis().branch_count();
    return st.abstract_data->branch_count_in_disk;
}

long TowerWorkspace::step_degree(std::size_t i) const {
    const TowerStep& st = spec_.steps[i];
    return st.group == StepGroup::Zp ? static_cast<long>(spec_.ctx->p()) : st.ell;
}

CoverWorkspace* TowerWorkspace::cover_workspace(std::size_t i) { return cover_ws_[i].get(); }

const PLProfile& TowerWorkspace::berk_step(std::size_t i) {
    if (berk_cache_[i]) return *berk_cache_[i];
    const TowerStep& st = spec_.steps[i];
    const unsigned long p = spec_.ctx->p();
    if (st.group == StepGroup::Zell) {
        berk_cache_[i] = PLProfile::constant(spec_.r0, Rat(0));  // tame: trivial different
        return *berk_cache_[i];
    }
    if (st.cover) {
        PLProfile depth = build_profile(*cover_ws_[i]);
        berk_cache_[i] = berk_from_depth(depth, p);
        return *berk_cache_[i];
    }
    const AbstractStepData& d = *st.abstract_data;
    PLProfile prof;
    if (d.berk_profile)
        prof = *d.berk_profile;
    else if (d.depth_profile)
        prof = berk_from_depth(*d.depth_profile, p);
    else
        throw_error(ErrorKind::Schema, "abstract Z/p step needs a profile");
    if (d.level_local)
        prof = convert_level_local(prof, d.radius_scale, d.radius_offset, spec_.r0);
    if (prof.r_end() != spec_.r0)
        throw_error(ErrorKind::DomainMismatch, "step profile domain differs from tower r0");
    if (!prof.nonnegative())
        throw_error(ErrorKind::Schema, "different profiles must be nonnegative");
    berk_cache_[i] = std::move(prof);
    return *berk_cache_[i];
}

PLProfile TowerWorkspace::composed_berk() {
    std::vector<PLProfile> parts;
    for (std::size_t i = 0; i < step_count(); ++i) parts.push_back(berk_step(i));
    return compose_differents(parts);
}

TowerDiskReport tower_disk_decision(TowerWorkspace& tw, const Rat& r) {
    const TowerSpec& spec = tw.spec();
    if (r <= 0 || r > spec.r0)
        throw_error(ErrorKind::Schema, "radius outside (0, r0]");
    const unsigned long p = spec.ctx->p();
    TowerDiskReport rep;
    rep.r = r;
    bool all_ok = true;
    long deg_below = 1;  // degree of the composed map under the current level
    long p_level = 0;
    for (std::size_t i = 0; i < tw.step_count(); ++i) {
        TowerLevelReport lvl;
        lvl.level = i + 1;
        lvl.group = spec.steps[i].group;
        if (!all_ok) {
            lvl.decided = false;
            lvl.criterion = "refused: a lower level is not a disk";
            rep.levels.push_back(lvl);
            continue;
        }
        if (spec.steps[i].group == StepGroup::Zell) {
            lvl.decided = true;
            lvl.closed_disk = tame_disk_predicate(tw.step_branch_count(i));
            lvl.criterion = "tame-branch-count";
        } else if (spec.steps[i].cover) {
            DiskReport dr = closed_disk_at(*tw.cover_workspace(i), r);
            lvl.decided = true;
            lvl.closed_disk = dr.is_closed_disk;
            lvl.criterion = "left-slope";
            ++p_level;
        } else {
            ++p_level;
            const PLProfile& berk = tw.berk_step(i);
            Rat target = rat(static_cast<long>(p) - 1, static_cast<long>(p)) *
                         Rat(tw.step_branch_count(i) - 1) / deg_below;
            Rat slope = berk.left_slope_at(r);
            if (slope > target)
                throw_error(ErrorKind::InternalInconsistency,
                            "step different slope exceeds its universal bound");
            lvl.decided = true;
            lvl.closed_disk = slope == target;
            lvl.criterion = "different-slope";
        }
        if (!lvl.closed_disk) {
            all_ok = false;
            rep.refused_from_level = static_cast<long>(i + 1);
        }
        rep.levels.push_back(lvl);
        deg_below *= tw.step_degree(i);
    }
    bool refused_above = false;
    for (auto& lvl : rep.levels)
        if (!lvl.decided) refused_above = true;
    rep.decided = !refused_above;
    rep.closed_disk = all_ok;
    rep.outcome = all_ok ? "closed-disk" : (refused_above ? "refused" : "not-closed-disk");

    if (spec.all_p_steps()) {
        std::vector<long> counts;
        for (std::size_t i = 0; i < tw.step_count(); ++i)
            counts.push_back(tw.step_branch_count(i));
        rep.m_diff_target = m_diff(counts, p);
        PLProfile composed = tw.composed_berk();
        rep.composed_left_slope = composed.left_slope_at(r);
        rep.aggregate_matches = *rep.composed_left_slope == *rep.m_diff_target;
        if (rep.closed_disk != *rep.aggregate_matches && rep.decided)
            throw_error(ErrorKind::InternalInconsistency,
                        "aggregate different criterion disagrees with the level walk");
        if (spec.character) {
            rep.m_swan_target = m_swan(counts, p, spec.character->induction_exponent);
            // the Swan criterion is a valid "if" only when Y/H' pulls back to
            // a disk: H' sits one Z/p below the top
            bool quotient_ok = true;
            for (std::size_t i = 0; i + 1 < rep.levels.size(); ++i)
                if (!rep.levels[i].decided || !rep.levels[i].closed_disk) quotient_ok = false;
            rep.swan_criterion_applicable = quotient_ok;
        }
    }
    return rep;
}

}  // namespace swancond
