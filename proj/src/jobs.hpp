#ifndef SWANCOND_JOBS_HPP
#define SWANCOND_JOBS_HPP

#include <string>

namespace swancond {

// One dispatched computation.  Commands: profile, swan-at, lambda,
// disk-check, vc-report, tower, family-min, kink-theorem, selfcheck.
//
// options_json (all optional):
//   {"r": "1/2", "m": 2, "precision": 48, "maxExtension": 64,
//    "gridCap": 12, "threads": 1, "mode": "diff"|"swan", "seed": 123,
//    "covers": 60, "pairs": 30}
//
// The payload is CSV for "profile" and JSON otherwise.  Identical inputs
// produce byte-identical payloads.
struct JobResult {
    int status = 0;          // 0 ok; nonzero per the error mapping
    std::string payload;     // result document (empty on failure)
    std::string error;       // error JSON on failure
    bool csv = false;
};

JobResult run_job(const std::string& command, const std::string& input_json,
                  const std::string& options_json);

}  // namespace swancond

#endif
