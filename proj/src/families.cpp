#include "families.hpp"

#include <algorithm>

namespace swancond {

void FamilySpec::finalize() {
    if (members.empty()) throw_error(ErrorKind::Schema, "family needs at least one member");
    if (s1 <= 0) throw_error(ErrorKind::Schema, "connectedness radius s1 must be positive");
    std::optional<Rat> min_branch_val;
    std::optional<long> count;
    for (auto& m : members) {
        if (m.id.empty()) throw_error(ErrorKind::Schema, "family members need ids");
        if (!m.cover == !m.tower)
            throw_error(ErrorKind::Schema, "each member is either a cover or a tower");
        if (m.cover) {
            long c = m.cover->branch_count_in_disk();
            if (count && *count != c)
                throw_error(ErrorKind::AssumptionViolation,
                            "members must share the branch count in the disk");
            count = c;
            for (auto& bp : m.cover->branch) {
                Rat v = *bp.x.valuation();
                if (!min_branch_val || v < *min_branch_val) min_branch_val = v;
            }
        } else {
            for (std::size_t i = 0; i < m.tower->steps.size(); ++i) {
                const TowerStep& st = m.tower->steps[i];
                if (st.cover)
                    for (auto& bp : st.cover->branch) {
                        Rat v = *bp.x.valuation();
                        if (!min_branch_val || v < *min_branch_val) min_branch_val = v;
                    }
            }
            // per-level count agreement across tower members
            std::vector<long> counts;
            for (std::size_t i = 0; i < m.tower->steps.size(); ++i) {
                const TowerStep& st = m.tower->steps[i];
                counts.push_back(st.cover ? st.cover->branch_count_in_disk()
                                          : st.abstract_data->branch_count_in_disk);
            }
            long flat = 0;
            for (long c : counts) flat = flat * 64 + c;  // order-sensitive fingerprint
            if (count && *count != flat)
                throw_error(ErrorKind::AssumptionViolation,
                            "tower members must share per-level branch counts");
            count = flat;
        }
    }
    s2 = min_branch_val ? *min_branch_val : s1;
    r0 = std::min(s1, s2);
    shared_branch_count = count ? *count : 0;
    for (auto& m : members) {
        if (m.cover) m.cover->r0 = r0;
        if (m.tower) {
            m.tower->r0 = r0;
            for (auto& st : m.tower->steps)
                if (st.cover) st.cover->r0 = r0;
        }
    }
    // ids must be distinct for deterministic certificates
    std::vector<std::string> ids;
    for (auto& m : members) ids.push_back(m.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw_error(ErrorKind::Schema, "member ids must be distinct");
}

FamilyWorkspace::FamilyWorkspace(FamilySpec spec, AnalysisOptions opts)
    : spec_(std::move(spec)), opts_(opts) {
    spec_.finalize();
    covers_.resize(spec_.members.size());
    towers_.resize(spec_.members.size());
    for (std::size_t i = 0; i < spec_.members.size(); ++i) {
        if (spec_.members[i].cover)
            covers_[i] = std::make_unique<CoverWorkspace>(*spec_.members[i].cover, opts_);
        else
            towers_[i] = std::make_unique<TowerWorkspace>(*spec_.members[i].tower, opts_);
    }
}

long FamilyWorkspace::member_index(const std::string& id) const {
    for (std::size_t i = 0; i < spec_.members.size(); ++i)
        if (spec_.members[i].id == id) return static_cast<long>(i);
    return -1;
}

namespace {

MemberEvaluation evaluate_cover_member(CoverWorkspace& ws) {
    MemberEvaluation ev;
    PLProfile profile = build_profile(ws);
    long m = ws.analysis().branch_count() - 1;
    Rat scan = lambda_by_scan(profile, Rat(m));
    std::optional<LambdaResult> closed;
    try {
        closed = ws.with_retry(
            [&](const CoverAnalysis& an) { return lambda_closed_form(an); });
    } catch (const SwanError&) {
        closed.reset();  // fall back to the scan
    }
    if (closed) {
        if (closed->value != scan)
            throw_error(ErrorKind::InternalInconsistency,
                        "closed-form lambda disagrees with the profile scan");
        ev.closed_form_ok = true;
        ev.closed_form_branch = closed->branch;
        ev.cm_vanished = closed->cm_vanished;
        ev.method = "closed-form+scan";
    } else {
        ev.method = "scan";
    }
    ev.lambda = scan;
    return ev;
}

template <typename Map>
std::pair<Rat, std::vector<std::string>> argmin_of(const Map& per_member) {
    std::optional<Rat> gamma;
    for (auto& [id, ev] : per_member)
        if (!gamma || ev.lambda < *gamma) gamma = ev.lambda;
    std::vector<std::string> argmin;
    for (auto& [id, ev] : per_member)
        if (ev.lambda == *gamma) argmin.push_back(id);
    std::sort(argmin.begin(), argmin.end());
    return {*gamma, std::move(argmin)};
}

}  // namespace

MinimizerCertificate family_lambda(FamilyWorkspace& fw) {
    MinimizerCertificate cert;
    for (std::size_t i = 0; i < fw.size(); ++i) {
        const FamilyMember& m = fw.spec().members[i];
        if (!m.cover)
            throw_error(ErrorKind::Schema,
                        "family minimization over kink radii takes cover members; use the "
                        "diff/swan mode for towers");
        cert.per_member[m.id] = evaluate_cover_member(*fw.cover(i));
    }
    auto [gamma, argmin] = argmin_of(cert.per_member);
    cert.gamma = gamma;
    cert.argmin = std::move(argmin);
    if (cert.argmin.empty())
        throw_error(ErrorKind::InternalInconsistency, "empty argmin on a nonempty family");
    return cert;
}

namespace {

// Exact verification radii: segment endpoints and midpoints of the member's
// depth profile restricted to (gamma, r0].
std::vector<Rat> verification_grid(const PLProfile& profile, const Rat& gamma) {
    std::vector<Rat> out;
    const Rat& r0 = profile.r_end();
    auto add = [&](const Rat& r) {
        if (r > gamma && r <= r0 && std::find(out.begin(), out.end(), r) == out.end())
            out.push_back(r);
    };
    const auto& breaks = profile.breaks();
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        Rat lo = std::max(breaks[i], gamma);
        Rat hi = breaks[i + 1];
        if (hi <= gamma) continue;
        add((lo + hi) / 2);
        add(hi);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

KinkTheoremVerdict kink_theorem_check(FamilyWorkspace& fw,
                                      const std::vector<Witness>& witnesses) {
    KinkTheoremVerdict verdict;
    verdict.certificate = family_lambda(fw);

    for (const Witness& w : witnesses) {
        long idx = fw.member_index(w.member_id);
        if (idx < 0) throw_error(ErrorKind::Schema, "witness names an unknown member");
        WitnessCheck check;
        check.r = w.r;
        check.member_id = w.member_id;
        DiskReport rep = closed_disk_at(*fw.cover(idx), w.r);
        check.closed_disk = rep.is_closed_disk;
        if (!check.closed_disk)
            throw_error(ErrorKind::WitnessInvalid,
                        "witness at r = " + rat_str(w.r) + " for member '" + w.member_id +
                            "' is not a closed disk");
        Rat lambda = verdict.certificate.per_member.at(w.member_id).lambda;
        check.lambda_below_radius = lambda < w.r;
        if (!check.lambda_below_radius)
            throw_error(ErrorKind::TheoremViolated,
                        "a validated witness radius does not exceed the member's lambda");
        verdict.witnesses.push_back(check);
    }

    if (!witnesses.empty()) {
        bool all_ok = true;
        for (const std::string& id : verdict.certificate.argmin) {
            long idx = fw.member_index(id);
            PLProfile profile = build_profile(*fw.cover(idx));
            std::vector<Rat> grid = verification_grid(profile, verdict.certificate.gamma);
            for (const Rat& r : grid) {
                DiskReport rep = closed_disk_at(*fw.cover(idx), r);
                if (!rep.is_closed_disk) all_ok = false;
                if (std::find(verdict.verification_grid.begin(),
                              verdict.verification_grid.end(),
                              r) == verdict.verification_grid.end())
                    verdict.verification_grid.push_back(r);
            }
        }
        std::sort(verdict.verification_grid.begin(), verdict.verification_grid.end());
        verdict.open_disk_certified = all_ok;
    }
    return verdict;
}

DiffSwanCertificate lambda_diff_swan(FamilyWorkspace& fw, DiffSwanMode mode) {
    DiffSwanCertificate cert;
    const unsigned long p = fw.spec().ctx->p();
    for (std::size_t i = 0; i < fw.size(); ++i) {
        const FamilyMember& m = fw.spec().members[i];
        DiffSwanEvaluation ev;
        std::vector<long> counts;
        PLProfile berk;
        std::optional<PLProfile> depth_chi;
        long induction_exponent = 0;
        if (m.cover) {
            CoverWorkspace& ws = *fw.cover(i);
            PLProfile depth = build_profile(ws);
            berk = berk_from_depth(depth, p);
            counts = {ws.analysis().branch_count()};
            depth_chi = depth;
        } else {
            TowerWorkspace& tw = *fw.tower(i);
            if (!tw.spec().all_p_steps())
                throw_error(ErrorKind::Schema,
                            "diff/swan minimization needs all-p-group towers");
            for (std::size_t s = 0; s < tw.step_count(); ++s)
                counts.push_back(tw.step_branch_count(s));
            berk = tw.composed_berk();
            if (mode == DiffSwanMode::Swan) {
                if (!tw.spec().character)
                    throw_error(ErrorKind::Schema,
                                "swan mode needs a character on each tower");
                induction_exponent = tw.spec().character->induction_exponent;
                std::vector<PLProfile> steps;
                for (std::size_t s = 0; s < tw.step_count(); ++s)
                    steps.push_back(tw.berk_step(s));
                depth_chi = lin_combo_depth(steps, induction_exponent, p);
                // quotient-disk hypothesis: every level below the top must
                // pull the disk back to a disk throughout (0, r0]
                if (tw.step_count() >= 2) {
                    std::vector<Rat> grid = verification_grid(berk, Rat(0));
                    for (const Rat& r : grid) {
                        TowerDiskReport rep = tower_disk_decision(tw, r);
                        bool quotient_ok = true;
                        for (std::size_t lv = 0; lv + 1 < rep.levels.size(); ++lv)
                            if (!rep.levels[lv].decided || !rep.levels[lv].closed_disk)
                                quotient_ok = false;
                        if (!quotient_ok)
                            throw_error(ErrorKind::AssumptionViolation,
                                        "swan mode requires the quotient tower to pull "
                                        "disks back to disks on (0, r0]");
                    }
                }
            }
        }
        if (mode == DiffSwanMode::Diff) {
            ev.target = m_diff(counts, p);
            ev.lambda = berk.largest_radius_with_left_slope_below(ev.target);
        } else {
            ev.target = m_swan(counts, p, induction_exponent);
            ev.lambda = depth_chi->largest_radius_with_left_slope_below(ev.target);
        }
        // residual-inseparability proxy: note sampled radii where the
        // composed different vanishes
        for (const Rat& r : verification_grid(berk, Rat(0)))
            if (berk.value_at(r) == 0) ev.zero_depth_radii.push_back(r);
        cert.per_member[m.id] = std::move(ev);
    }
    auto [gamma, argmin] = argmin_of(cert.per_member);
    cert.gamma = gamma;
    cert.argmin = std::move(argmin);
    return cert;
}

}  // namespace swancond
