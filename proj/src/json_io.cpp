#include "json_io.hpp"

#include <algorithm>
#include <sstream>

namespace swancond {

namespace {

[[noreturn]] void bad(const std::string& what) { throw_error(ErrorKind::Schema, what); }

long get_long(const Json& j, const char* key, std::optional<long> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        bad(std::string("missing field '") + key + "'");
    }
    if (!j[key].is_number_integer()) bad(std::string("field '") + key + "' must be an integer");
    return j[key].get<long>();
}

}  // namespace

Rat parse_rat(const Json& j) {
    try {
        if (j.is_string()) return rat_parse(j.get<std::string>());
        if (j.is_number_integer()) return Rat(j.get<long>());
    } catch (const std::exception& e) {
        bad(e.what());
    }
    bad("rationals are \"num/den\" strings");
}

FieldCtxPtr parse_field(const Json& j, std::optional<long> precision_override) {
    if (!j.is_object()) bad("field configuration must be an object");
    long p = get_long(j, "p");
    long f = get_long(j, "f", 1);
    long e = get_long(j, "e", 1);
    long n = precision_override ? *precision_override : get_long(j, "precision", 48);
    if (p < 2 || f < 1 || e < 1 || n < 3) bad("invalid field configuration");
    try {
        return make_field(p, f, e, n);
    } catch (const SwanError&) {
        throw;
    } catch (const std::exception& e2) {
        bad(e2.what());
    }
}

Elem parse_elem(const Json& j, const FieldCtxPtr& ctx) {
    if (j.is_string() || j.is_number_integer()) {
        Rat q = parse_rat(j);
        return Elem::from_rational(ctx, q);
    }
    if (j.is_object()) {
        long shift = get_long(j, "piShift", 0);
        if (!j.contains("digits") || !j["digits"].is_array()) bad("element needs digits");
        std::vector<std::vector<Int>> digits;
        for (const Json& dj : j["digits"]) {
            std::vector<Int> coords;
            if (dj.is_array()) {
                for (const Json& cj : dj) coords.emplace_back(parse_rat(cj).get_num());
            } else {
                coords.emplace_back(parse_rat(dj).get_num());
            }
            digits.push_back(std::move(coords));
        }
        return Elem::from_digits(ctx, shift, std::move(digits));
    }
    bad("element literals are rational strings or {piShift, digits} objects");
}

LaurentSeries parse_series(const Json& j, const FieldCtxPtr& ctx) {
    LaurentSeries s(ctx);
    if (!j.is_object()) bad("series must be an object");
    const Json& terms = j.contains("terms") ? j["terms"] : j;
    for (auto it = terms.begin(); it != terms.end(); ++it) {
        if (it.key() == "negTailSlope" || it.key() == "posTailSlope" || it.key() == "terms")
            continue;
        long degree = 0;
        try {
            degree = std::stol(it.key());
        } catch (const std::exception&) {
            bad("series keys are integer degrees");
        }
        s.set_coeff(degree, parse_elem(it.value(), ctx));
    }
    if (j.contains("negTailSlope")) s.set_neg_tail(TailCertificate{parse_rat(j["negTailSlope"])});
    if (j.contains("posTailSlope")) s.set_pos_tail(TailCertificate{parse_rat(j["posTailSlope"])});
    return s;
}

CoverSpec parse_cover(const Json& j, const FieldCtxPtr& ctx) {
    if (!j.is_object()) bad("cover must be an object");
    CoverSpec c;
    c.ctx = ctx;
    c.alpha0 = get_long(j, "alpha0", 0);
    if (j.contains("branch")) {
        if (!j["branch"].is_array()) bad("branch must be a list");
        for (const Json& bj : j["branch"]) {
            BranchPoint bp{parse_elem(bj.at("x"), ctx), get_long(bj, "alpha", 1)};
            c.branch.push_back(std::move(bp));
        }
    }
    c.unit_u = j.contains("unitU") ? parse_series(j["unitU"], ctx) : LaurentSeries::one(ctx);
    if (c.unit_u.coeff(0).is_exact_zero()) c.unit_u.set_coeff(0, Elem::one(ctx));
    c.genus = get_long(j, "genus", 0);
    c.outside_branch_bound = get_long(j, "outsideBranchBound", 0);
    c.r0 = j.contains("r0") ? parse_rat(j["r0"]) : Rat(1);
    c.assume_connected = j.value("assumeConnected", false);
    return c;
}

PLProfile parse_profile(const Json& j) {
    if (!j.is_object()) bad("profile must be an object");
    if (j.contains("constant")) {
        return PLProfile::constant(parse_rat(j.at("rEnd")), parse_rat(j["constant"]));
    }
    if (!j.contains("breakpoints") || !j["breakpoints"].is_array())
        bad("profile needs a breakpoints list");
    std::vector<Rat> breaks, values;
    for (const Json& bj : j["breakpoints"]) {
        breaks.push_back(parse_rat(bj.at("r")));
        values.push_back(parse_rat(bj.at("value")));
    }
    return PLProfile::from_points(std::move(breaks), std::move(values));
}

TowerSpec parse_tower(const Json& j, const FieldCtxPtr& ctx) {
    if (!j.is_object()) bad("tower must be an object");
    TowerSpec t;
    t.ctx = ctx;
    t.r0 = j.contains("r0") ? parse_rat(j["r0"]) : Rat(1);
    if (!j.contains("steps") || !j["steps"].is_array()) bad("tower needs steps");
    for (const Json& sj : j["steps"]) {
        TowerStep st;
        std::string group = sj.value("group", "Z/p");
        if (group == "Z/p") {
            st.group = StepGroup::Zp;
        } else if (group == "Z/ell") {
            st.group = StepGroup::Zell;
            st.ell = get_long(sj, "ell");
        } else {
            bad("step group is Z/p or Z/ell");
        }
        if (sj.contains("cover")) st.cover = parse_cover(sj["cover"], ctx);
        if (sj.contains("abstract")) {
            const Json& aj = sj["abstract"];
            AbstractStepData d;
            d.branch_count_in_disk = get_long(aj, "branchCountInDisk");
            if (aj.contains("berkProfile")) d.berk_profile = parse_profile(aj["berkProfile"]);
            if (aj.contains("depthProfile")) d.depth_profile = parse_profile(aj["depthProfile"]);
            std::string coords = aj.value("coordinates", "r");
            if (coords == "level-local") {
                d.level_local = true;
                d.radius_scale = aj.contains("radiusScale") ? parse_rat(aj["radiusScale"])
                                                            : Rat(1);
                d.radius_offset = aj.contains("radiusOffset") ? parse_rat(aj["radiusOffset"])
                                                              : Rat(0);
            } else if (coords != "r") {
                bad("profile coordinates are \"r\" or \"level-local\"");
            }
            st.abstract_data = std::move(d);
        } else if (st.group == StepGroup::Zell) {
            AbstractStepData d;
            d.branch_count_in_disk = get_long(sj, "branchCountInDisk");
            st.abstract_data = std::move(d);
        }
        t.steps.push_back(std::move(st));
    }
    if (j.contains("character")) {
        const Json& cj = j["character"];
        CharacterSpec ch;
        ch.order_exponent = get_long(cj, "orderExponent");
        ch.induction_exponent = get_long(cj, "inductionExponent", 0);
        ch.subgroup_in_series = cj.value("subgroupInSeries", true);
        t.character = ch;
    }
    return t;
}

FamilySpec parse_family(const Json& j, const FieldCtxPtr& ctx) {
    if (!j.is_object()) bad("family must be an object");
    FamilySpec fam;
    fam.ctx = ctx;
    fam.s1 = j.contains("s1") ? parse_rat(j["s1"]) : Rat(1);
    if (!j.contains("members") || !j["members"].is_array()) bad("family needs members");
    for (const Json& mj : j["members"]) {
        FamilyMember m;
        m.id = mj.value("id", "");
        if (mj.contains("cover")) m.cover = parse_cover(mj["cover"], ctx);
        if (mj.contains("tower")) m.tower = parse_tower(mj["tower"], ctx);
        fam.members.push_back(std::move(m));
    }
    return fam;
}

std::vector<Witness> parse_witnesses(const Json& j) {
    std::vector<Witness> out;
    if (!j.is_array()) bad("witnesses must be a list");
    for (const Json& wj : j) {
        Witness w;
        w.r = parse_rat(wj.at("r"));
        w.member_id = wj.at("member").get<std::string>();
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<GroupEntry> parse_group_data(const Json& j) {
    std::vector<GroupEntry> out;
    if (!j.is_array()) bad("group data must be a list");
    for (const Json& gj : j) {
        GroupEntry g{};
        std::string type = gj.value("type", "cyclic");
        if (type == "cyclic") {
            g.kind = GroupEntry::Kind::Cyclic;
            g.order = get_long(gj, "order");
        } else if (type == "p-extension") {
            g.kind = GroupEntry::Kind::PExtension;
            g.p_part_order = get_long(gj, "pPartOrder");
            g.cyclic_quotient_order = get_long(gj, "cyclicQuotientOrder");
        } else if (type == "simple-nonabelian") {
            g.kind = GroupEntry::Kind::SimpleNonabelian;
        } else {
            bad("unknown group entry type");
        }
        out.push_back(g);
    }
    return out;
}

// ---- serialization ----

Json rat_json(const Rat& q) { return rat_str(q); }

Json fq_json(const FqElem& c) {
    if (c.ctx()->f() == 1) return std::to_string(c.coords()[0]);
    Json arr = Json::array();
    for (unsigned long v : c.coords()) arr.push_back(std::to_string(v));
    return arr;
}

namespace {

Json fq_poly_json(const FqPoly& p) {
    Json arr = Json::array();
    for (long i = 0; i <= p.degree(); ++i) arr.push_back(fq_json(p.coeff(i)));
    if (p.is_zero()) arr.push_back(fq_json(FqElem::zero(p.ctx())));
    return arr;
}

}  // namespace

Json rational_fn_json(const RationalFn& f) {
    return Json{{"num", fq_poly_json(f.num())}, {"den", fq_poly_json(f.den())}};
}

Json place_json(const Place& p) {
    if (p.kind == Place::Kind::Infinity) return "infinity";
    std::ostringstream os;
    os << p.poly.str();
    return os.str();
}

Json swan_value_json(const SwanValue& v) {
    Json j;
    j["depth"] = rat_json(v.depth);
    switch (v.regime) {
        case SwanRegime::ZeroDepth: j["regime"] = "zero-depth"; break;
        case SwanRegime::ExactDifferential: j["regime"] = "exact-dg"; break;
        case SwanRegime::Logarithmic: j["regime"] = "logarithmic-dg/g"; break;
    }
    if (v.form) {
        j["form"] = rational_fn_json(v.form->coefficient());
        j["formDisplay"] = "(" + v.form->coefficient().str() + ") dt";
    }
    return j;
}

Json profile_json(const PLProfile& p) {
    Json j;
    j["rEnd"] = rat_json(p.r_end());
    Json pts = Json::array();
    for (std::size_t i = 0; i < p.breaks().size(); ++i)
        pts.push_back(Json{{"r", rat_json(p.breaks()[i])}, {"value", rat_json(p.values()[i])}});
    j["breakpoints"] = pts;
    Json slopes = Json::array();
    for (std::size_t i = 0; i < p.segment_count(); ++i)
        slopes.push_back(rat_json(p.segment_slope(i)));
    j["slopes"] = slopes;
    Json kinks = Json::array();
    for (const Rat& k : p.kinks()) kinks.push_back(rat_json(k));
    j["kinks"] = kinks;
    return j;
}

Json disk_report_json(const DiskReport& r) {
    Json j;
    j["r"] = rat_json(r.r);
    j["branchCountInDisk"] = r.branch_count_in_disk;
    j["leftSlope"] = r.left_slope;
    j["depth"] = rat_json(r.depth);
    j["residuallyInseparable"] = r.residually_inseparable;
    j["isClosedDisk"] = r.is_closed_disk;
    j["criterionUsed"] = r.criterion_used;
    if (r.omega_criterion) j["omegaCriterion"] = *r.omega_criterion;
    return j;
}

Json vc_report_json(const VcReport& r) {
    Json j;
    j["r"] = rat_json(r.r);
    j["depth"] = rat_json(r.depth);
    if (r.skipped_zero_depth) {
        j["skipped"] = "zero-depth";
        return j;
    }
    Json pts = Json::array();
    for (const VcPoint& pt : r.points) {
        pts.push_back(Json{{"place", place_json(pt.place)},
                           {"ord", pt.ord},
                           {"branchAbove", pt.branch_above},
                           {"deltaY", rat_json(pt.delta_y)}});
    }
    j["points"] = pts;
    j["ordInfinity"] = r.ord_infinity;
    j["ordInfinityLowerBound"] = rat_json(r.ord_infinity_lower_bound);
    j["degreeSum"] = r.degree_sum;
    j["smooth"] = r.smooth;
    j["closedDisk"] = r.closed_disk;
    j["smoothMatchesDisk"] = r.smooth_matches_disk;
    return j;
}

Json tower_report_json(const TowerDiskReport& r) {
    Json j;
    j["r"] = rat_json(r.r);
    j["outcome"] = r.outcome;
    j["closedDisk"] = r.closed_disk;
    j["decided"] = r.decided;
    if (r.refused_from_level > 0) j["failedLevel"] = r.refused_from_level;
    Json lvls = Json::array();
    for (const TowerLevelReport& l : r.levels) {
        Json lj;
        lj["level"] = l.level;
        lj["group"] = l.group == StepGroup::Zp ? "Z/p" : "Z/ell";
        lj["decided"] = l.decided;
        if (l.decided) lj["closedDisk"] = l.closed_disk;
        lj["criterion"] = l.criterion;
        lvls.push_back(lj);
    }
    j["levels"] = lvls;
    if (r.m_diff_target) j["mDiff"] = rat_json(*r.m_diff_target);
    if (r.composed_left_slope) j["composedLeftSlope"] = rat_json(*r.composed_left_slope);
    if (r.aggregate_matches) j["aggregateMatches"] = *r.aggregate_matches;
    if (r.m_swan_target) j["mSwan"] = rat_json(*r.m_swan_target);
    if (r.swan_criterion_applicable) j["swanCriterionApplicable"] = *r.swan_criterion_applicable;
    return j;
}

Json certificate_json(const MinimizerCertificate& c) {
    Json j;
    j["gamma"] = rat_json(c.gamma);
    j["argmin"] = c.argmin;
    Json per = Json::object();
    for (auto& [id, ev] : c.per_member) {
        Json e;
        e["lambda"] = rat_json(ev.lambda);
        e["method"] = ev.method;
        if (ev.closed_form_ok) e["closedFormBranch"] = ev.closed_form_branch;
        if (ev.cm_vanished) e["cmVanished"] = true;
        per[id] = e;
    }
    j["perMember"] = per;
    return j;
}

Json verdict_json(const KinkTheoremVerdict& v) {
    Json j;
    j["certificate"] = certificate_json(v.certificate);
    Json ws = Json::array();
    for (const WitnessCheck& w : v.witnesses)
        ws.push_back(Json{{"r", rat_json(w.r)},
                          {"member", w.member_id},
                          {"closedDisk", w.closed_disk},
                          {"lambdaBelowRadius", w.lambda_below_radius}});
    j["witnesses"] = ws;
    j["openDiskCertified"] = v.open_disk_certified;
    Json grid = Json::array();
    for (const Rat& r : v.verification_grid) grid.push_back(rat_json(r));
    j["verificationGrid"] = grid;
    return j;
}

Json diff_swan_json(const DiffSwanCertificate& c) {
    Json j;
    j["gamma"] = rat_json(c.gamma);
    j["argmin"] = c.argmin;
    Json per = Json::object();
    for (auto& [id, ev] : c.per_member) {
        Json e;
        e["lambda"] = rat_json(ev.lambda);
        e["target"] = rat_json(ev.target);
        Json zr = Json::array();
        for (const Rat& r : ev.zero_depth_radii) zr.push_back(rat_json(r));
        e["zeroDepthRadii"] = zr;
        per[id] = e;
    }
    j["perMember"] = per;
    return j;
}

Json lambda_result_json(const LambdaResult& l) {
    Json j;
    j["lambda"] = rat_json(l.value);
    j["m"] = l.m;
    j["branch"] = l.branch;
    if (l.mu && !l.mu->infinite) j["mu"] = rat_json(l.mu->value);
    if (l.cm_vanished) j["cmVanished"] = true;
    if (l.s_u > 0) j["sU"] = l.s_u;
    return j;
}

std::string profile_csv(const PLProfile& profile, const std::vector<Rat>& sample_radii) {
    std::vector<Rat> rows = sample_radii;
    for (const Rat& b : profile.breaks())
        if (b > 0) rows.push_back(b);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    std::vector<Rat> kinks = profile.kinks();
    std::ostringstream os;
    os << "r,delta,left_slope,right_slope,is_kink\n";
    for (const Rat& r : rows) {
        if (r <= 0 || r > profile.r_end()) continue;
        Rat right = r < profile.r_end() ? profile.right_slope_at(r) : profile.left_slope_at(r);
        bool kink = std::find(kinks.begin(), kinks.end(), r) != kinks.end();
        os << rat_str(r) << ',' << rat_str(profile.value_at(r)) << ','
           << rat_str(profile.left_slope_at(r)) << ',' << rat_str(right) << ','
           << (kink ? 1 : 0) << '\n';
    }
    return os.str();
}

}  // namespace swancond
