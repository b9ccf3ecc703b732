// Command-line front end for the swancond shared library.  Reads a JSON job
// document, dispatches through the C API, and writes the payload to a file
// or stdout.  Exit codes: 0 ok, 1 usage, 2 schema, 3 extension required,
// 4 precision loss, 5 inconclusive, 6 internal inconsistency.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "swancond.h"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CLI::ValidationError("--in", "cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run(const std::string& command, const std::string& input, const std::string& options,
        const std::string& out_path) {
    swancond_result* result = nullptr;
    int status = swancond_run_job(command.c_str(), input.c_str(), options.c_str(), &result);
    if (result == nullptr) {
        std::cerr << "swancond: allocation failure\n";
        return SWANCOND_ERR_INTERNAL;
    }
    if (status == SWANCOND_OK) {
        const char* payload = swancond_result_payload(result);
        if (out_path.empty() || out_path == "-") {
            std::cout << payload;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                std::cerr << "swancond: cannot write " << out_path << "\n";
                swancond_result_free(result);
                return SWANCOND_ERR_USAGE;
            }
            out << payload;
        }
    } else {
        std::cerr << swancond_result_error(result);
    }
    swancond_result_free(result);
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Swan conductor profiles, kinks, and disk criteria for covers of "
                 "p-adic disks"};
    app.require_subcommand(1);

    std::string in_path, out_path, radius, mode;
    long m_target = 0;
    bool m_set = false;
    long precision = 0, max_extension = 0, grid_cap = 0, threads = 0;
    unsigned long seed = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        if (needs_input)
            cmd->add_option("--in", in_path, "input JSON file")->required();
        cmd->add_option("--out", out_path, "output file (default stdout)");
        cmd->add_option("--precision", precision, "working precision in p-adic digits");
        cmd->add_option("--max-extension", max_extension, "cap on e*f under extensions");
        cmd->add_option("--grid-cap", grid_cap, "profile refinement cap");
        cmd->add_option("--threads", threads, "worker threads for batch evaluation");
    };

    CLI::App* profile = app.add_subcommand("profile", "depth profile as CSV");
    add_common(profile, true);
    CLI::App* swan_at = app.add_subcommand("swan-at", "depth and form at one radius");
    add_common(swan_at, true);
    swan_at->add_option("--r", radius, "radius as num/den")->required();
    CLI::App* lambda = app.add_subcommand("lambda", "kink radius: closed form and scan");
    add_common(lambda, true);
    lambda->add_option("--m", m_target, "target slope override")->each([&](const std::string&) {
        m_set = true;
    });
    CLI::App* disk = app.add_subcommand("disk-check", "closed-disk criterion at a radius");
    add_common(disk, true);
    disk->add_option("--r", radius, "radius as num/den")->required();
    CLI::App* vc = app.add_subcommand("vc-report", "vanishing-cycles consistency report");
    add_common(vc, true);
    vc->add_option("--r", radius, "radius as num/den")->required();
    CLI::App* tower = app.add_subcommand("tower", "tower disk decision at a radius");
    add_common(tower, true);
    tower->add_option("--r", radius, "radius as num/den")->required();
    CLI::App* family = app.add_subcommand("family-min", "family minimizer certificate");
    add_common(family, true);
    family->add_option("--mode", mode, "diff | swan (tower families)");
    CLI::App* kink = app.add_subcommand("kink-theorem", "witness checks and certificate");
    add_common(kink, true);
    CLI::App* selfcheck = app.add_subcommand("selfcheck", "run the invariant suites");
    add_common(selfcheck, false);
    selfcheck->add_option("--seed", seed, "corpus seed")->each([&](const std::string&) {
        seed_set = true;
    });

    CLI11_PARSE(app, argc, argv);

    std::string command = app.get_subcommands().front()->get_name();
    std::string input;
    if (!in_path.empty()) {
        try {
            input = slurp(in_path);
        } catch (const CLI::Error& e) {
            std::cerr << e.what() << "\n";
            return SWANCOND_ERR_USAGE;
        }
    }

    std::ostringstream opts;
    opts << "{";
    bool first = true;
    auto emit = [&](const std::string& key, const std::string& value, bool quote) {
        opts << (first ? "" : ",") << "\"" << key << "\":";
        if (quote) opts << "\"" << value << "\"";
        else opts << value;
        first = false;
    };
    if (!radius.empty()) emit("r", radius, true);
    if (m_set) emit("m", std::to_string(m_target), false);
    if (precision > 0) emit("precision", std::to_string(precision), false);
    if (max_extension > 0) emit("maxExtension", std::to_string(max_extension), false);
    if (grid_cap > 0) emit("gridCap", std::to_string(grid_cap), false);
    if (threads > 0) emit("threads", std::to_string(threads), false);
    if (!mode.empty()) emit("mode", mode, true);
    if (seed_set) emit("seed", std::to_string(seed), false);
    opts << "}";

    return run(command, input, opts.str(), out_path);
}
