#include "swancond.h"

#include <new>
#include <string>

#include "jobs.hpp"

struct swancond_result {
    int status = SWANCOND_OK;
    std::string payload;
    std::string error;
    bool csv = false;
};

extern "C" {

int swancond_run_job(const char* command, const char* input_json, const char* options_json,
                     swancond_result** out) {
    if (out == nullptr) return SWANCOND_ERR_USAGE;
    *out = nullptr;
    auto* result = new (std::nothrow) swancond_result;
    if (result == nullptr) return SWANCOND_ERR_INTERNAL;
    if (command == nullptr) {
        result->status = SWANCOND_ERR_USAGE;
        result->error = "{\"error\":\"Usage\",\"message\":\"missing command\"}\n";
        *out = result;
        return result->status;
    }
    try {
        swancond::JobResult job = swancond::run_job(
            command, input_json ? input_json : "", options_json ? options_json : "");
        result->status = job.status;
        result->payload = std::move(job.payload);
        result->error = std::move(job.error);
        result->csv = job.csv;
    } catch (...) {
        result->status = SWANCOND_ERR_INTERNAL;
        result->error = "{\"error\":\"InternalInconsistency\"}\n";
    }
    *out = result;
    return result->status;
}

int swancond_result_status(const swancond_result* result) {
    return result ? result->status : SWANCOND_ERR_USAGE;
}

const char* swancond_result_payload(const swancond_result* result) {
    return result ? result->payload.c_str() : "";
}

int swancond_result_payload_is_csv(const swancond_result* result) {
    return result && result->csv ? 1 : 0;
}

const char* swancond_result_error(const swancond_result* result) {
    return result ? result->error.c_str() : "";
}

void swancond_result_free(swancond_result* result) { delete result; }

const char* swancond_version(void) { return "swancond 1.0.0"; }

}  // extern "C"
