#include "jobs.hpp"

#include "json_io.hpp"
#include "selfcheck.hpp"

namespace swancond {

namespace {

struct JobOptions {
    std::optional<long> precision;
    AnalysisOptions analysis;
    std::optional<Rat> radius;
    std::optional<long> m;
    std::string mode;
    SelfCheckOptions selfcheck;
};

JobOptions parse_options(const std::string& options_json) {
    JobOptions o;
    if (options_json.empty()) return o;
    Json j = Json::parse(options_json, nullptr, true);
    if (!j.is_object()) throw_error(ErrorKind::Usage, "options must be a JSON object");
    if (j.contains("precision")) o.precision = j["precision"].get<long>();
    if (j.contains("maxExtension")) o.analysis.ef_cap = j["maxExtension"].get<long>();
    if (j.contains("gridCap")) o.analysis.grid_cap = j["gridCap"].get<long>();
    if (j.contains("r")) o.radius = parse_rat(j["r"]);
    if (j.contains("m")) o.m = j["m"].get<long>();
    if (j.contains("mode")) o.mode = j["mode"].get<std::string>();
    if (j.contains("seed")) o.selfcheck.seed = j["seed"].get<unsigned long>();
    if (j.contains("covers")) o.selfcheck.covers = j["covers"].get<long>();
    if (j.contains("pairs")) o.selfcheck.pairs = j["pairs"].get<long>();
    if (j.contains("threads")) o.selfcheck.threads = j["threads"].get<long>();
    o.selfcheck.analysis = o.analysis;
    return o;
}

Json parse_input(const std::string& input_json) {
    Json j = Json::parse(input_json, nullptr, false);
    if (j.is_discarded()) throw_error(ErrorKind::Schema, "input is not valid JSON");
    if (!j.is_object()) throw_error(ErrorKind::Schema, "input must be a JSON object");
    return j;
}

Rat required_radius(const JobOptions& o, const Json& input) {
    if (o.radius) return *o.radius;
    if (input.contains("r")) return parse_rat(input["r"]);
    throw_error(ErrorKind::Usage, "this command needs a radius (option \"r\")");
}

CoverWorkspace cover_workspace(const Json& input, const JobOptions& o) {
    FieldCtxPtr ctx = parse_field(input.at("field"), o.precision);
    CoverSpec cover = parse_cover(input.at("cover"), ctx);
    return CoverWorkspace(std::move(cover), o.analysis);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

JobResult dispatch(const std::string& command, const std::string& input_json,
                   const JobOptions& o) {
    JobResult res;
    if (command == "selfcheck") {
        SelfCheckReport rep = run_selfcheck(o.selfcheck);
        Json j;
        j["ok"] = rep.ok;
        j["coversChecked"] = rep.covers_checked;
        j["radiiChecked"] = rep.radii_checked;
        j["pairsChecked"] = rep.pairs_checked;
        j["eliminationsChecked"] = rep.eliminations_checked;
        j["vectorsChecked"] = rep.vectors_checked;
        j["failures"] = rep.failures;
        res.payload = dump(j);
        if (!rep.ok) {
            res.status = error_kind_status(ErrorKind::InternalInconsistency);
            res.error = res.payload;
        }
        return res;
    }

    Json input = parse_input(input_json);

    if (command == "profile") {
        CoverWorkspace ws = cover_workspace(input, o);
        PLProfile profile = build_profile(ws);
        std::vector<Rat> samples;
        long e = static_cast<long>(ws.analysis().ctx()->e());
        for (long k = 1; k <= e; ++k) samples.push_back(profile.r_end() * Rat(k) / e);
        res.payload = profile_csv(profile, samples);
        res.csv = true;
        return res;
    }
    if (command == "swan-at") {
        CoverWorkspace ws = cover_workspace(input, o);
        Rat r = required_radius(o, input);
        ws.ensure_radius(r);
        SwanValue v = ws.with_retry([&](const CoverAnalysis& an) { return an.swan_at(r); });
        Json j = swan_value_json(v);
        j["r"] = rat_json(r);
        j["leftSlope"] =
            ws.with_retry([&](const CoverAnalysis& an) { return an.left_slope_at(r); });
        if (r < ws.analysis().r0())
            j["rightSlope"] =
                ws.with_retry([&](const CoverAnalysis& an) { return an.right_slope_at(r); });
        res.payload = dump(j);
        return res;
    }
    if (command == "lambda") {
        CoverWorkspace ws = cover_workspace(input, o);
        LambdaResult closed =
            ws.with_retry([&](const CoverAnalysis& an) { return lambda_closed_form(an); });
        PLProfile profile = build_profile(ws);
        long m = o.m ? *o.m : closed.m;
        Rat scan = lambda_by_scan(profile, Rat(m));
        Json j = lambda_result_json(closed);
        j["scanLambda"] = rat_json(scan);
        j["scanM"] = m;
        j["agreement"] = (m == closed.m) ? Json(closed.value == scan) : Json(nullptr);
        res.payload = dump(j);
        return res;
    }
    if (command == "disk-check") {
        CoverWorkspace ws = cover_workspace(input, o);
        Rat r = required_radius(o, input);
        res.payload = dump(disk_report_json(closed_disk_at(ws, r)));
        return res;
    }
    if (command == "vc-report") {
        CoverWorkspace ws = cover_workspace(input, o);
        Rat r = required_radius(o, input);
        res.payload = dump(vc_report_json(vanishing_cycles_report(ws, r)));
        return res;
    }
    if (command == "tower") {
        FieldCtxPtr ctx = parse_field(input.at("field"), o.precision);
        TowerSpec tower = parse_tower(input.at("tower"), ctx);
        TowerWorkspace tw(std::move(tower), o.analysis);
        Rat r = required_radius(o, input);
        Json j = tower_report_json(tower_disk_decision(tw, r));
        j["composedBerkProfile"] = profile_json(tw.composed_berk());
        if (input.contains("groupData"))
            j["solvableStructure"] =
                solvable_structure_check(parse_group_data(input["groupData"]), ctx->p());
        if (input.contains("evalE1")) {
            const Json& e1 = input["evalE1"];
            j["evalE1"] = rat_json(eval_e1(parse_rat(e1.at("deltaY")),
                                           parse_rat(e1.at("deltaZ")),
                                           parse_rat(e1.at("deltaX")),
                                           e1.at("branchNear").get<long>(), ctx->p(),
                                           e1.at("n").get<long>()));
        }
        res.payload = dump(j);
        return res;
    }
    if (command == "family-min") {
        FieldCtxPtr ctx = parse_field(input.at("field"), o.precision);
        FamilySpec fam = parse_family(input.at("family"), ctx);
        FamilyWorkspace fw(std::move(fam), o.analysis);
        bool has_tower = false;
        for (auto& m : fw.spec().members)
            if (m.tower) has_tower = true;
        Json j;
        if (o.mode == "swan" || o.mode == "diff" || has_tower) {
            DiffSwanMode mode = o.mode == "swan" ? DiffSwanMode::Swan : DiffSwanMode::Diff;
            j = diff_swan_json(lambda_diff_swan(fw, mode));
            j["mode"] = mode == DiffSwanMode::Swan ? "swan" : "diff";
        } else {
            j = certificate_json(family_lambda(fw));
        }
        j["r0"] = rat_json(fw.spec().r0);
        res.payload = dump(j);
        return res;
    }
    if (command == "kink-theorem") {
        FieldCtxPtr ctx = parse_field(input.at("field"), o.precision);
        FamilySpec fam = parse_family(input.at("family"), ctx);
        std::vector<Witness> ws =
            input.contains("witnesses") ? parse_witnesses(input["witnesses"])
                                        : std::vector<Witness>{};
        FamilyWorkspace fw(std::move(fam), o.analysis);
        res.payload = dump(verdict_json(kink_theorem_check(fw, ws)));
        return res;
    }
    throw_error(ErrorKind::Usage, "unknown command '" + command + "'");
}

}  // namespace

JobResult run_job(const std::string& command, const std::string& input_json,
                  const std::string& options_json) {
    try {
        JobOptions o = parse_options(options_json);
        return dispatch(command, input_json, o);
    } catch (const SwanError& e) {
        JobResult res;
        res.status = error_kind_status(e.kind());
        Json err;
        err["error"] = error_kind_name(e.kind());
        err["message"] = e.what();
        err["status"] = res.status;
        res.error = err.dump(2) + "\n";
        return res;
    } catch (const Json::exception& e) {
        JobResult res;
        res.status = error_kind_status(ErrorKind::Schema);
        Json err;
        err["error"] = "Schema";
        err["message"] = e.what();
        err["status"] = res.status;
        res.error = err.dump(2) + "\n";
        return res;
    } catch (const std::exception& e) {
        JobResult res;
        res.status = error_kind_status(ErrorKind::InternalInconsistency);
        Json err;
        err["error"] = "InternalInconsistency";
        err["message"] = e.what();
        err["status"] = res.status;
        res.error = err.dump(2) + "\n";
        return res;
    }
}

}  // namespace swancond
