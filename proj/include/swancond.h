/* swancond: exact depth/differential Swan conductor computations for
 * Z/p- and Z/ell-covers of p-adic disks.
 *
 * The library runs self-contained jobs: a command name plus a JSON input
 * document produce a JSON (or CSV) payload.  All rationals in the documents
 * are exact "num/den" strings; identical inputs yield byte-identical
 * payloads.  Results are returned through an opaque handle that owns the
 * payload buffers.
 */

#ifndef SWANCOND_H
#define SWANCOND_H

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes, also used as CLI exit codes. */
enum {
    SWANCOND_OK = 0,
    SWANCOND_ERR_USAGE = 1,      /* unknown command / missing argument */
    SWANCOND_ERR_SCHEMA = 2,     /* malformed input or violated input contract */
    SWANCOND_ERR_EXTENSION = 3,  /* a field extension beyond the cap is needed */
    SWANCOND_ERR_PRECISION = 4,  /* a result is not determined at working precision */
    SWANCOND_ERR_INCONCLUSIVE = 5, /* non-converging or undecidable computation */
    SWANCOND_ERR_INTERNAL = 6    /* internal inconsistency (bug detector) */
};

typedef struct swancond_result swancond_result;

/* Runs one job.  command: "profile", "swan-at", "lambda", "disk-check",
 * "vc-report", "tower", "family-min", "kink-theorem", or "selfcheck".
 * input_json: the job document (may be NULL or "" for selfcheck).
 * options_json: optional JSON object ("r", "m", "precision", "maxExtension",
 * "gridCap", "threads", "mode", "seed", ...); may be NULL.
 *
 * Returns a status code; *out receives a handle in every case (including
 * failures) unless allocation itself fails, in which case *out is NULL and
 * the return value is SWANCOND_ERR_INTERNAL.  Free the handle with
 * swancond_result_free. */
int swancond_run_job(const char* command, const char* input_json,
                     const char* options_json, swancond_result** out);

/* Status of a finished job (same value swancond_run_job returned). */
int swancond_result_status(const swancond_result* result);

/* NUL-terminated result payload (CSV for "profile", JSON otherwise);
 * empty string on failure.  Owned by the handle. */
const char* swancond_result_payload(const swancond_result* result);

/* 1 when the payload is CSV, 0 when it is JSON. */
int swancond_result_payload_is_csv(const swancond_result* result);

/* NUL-terminated error document (JSON) on failure; empty string on success. */
const char* swancond_result_error(const swancond_result* result);

void swancond_result_free(swancond_result* result);

/* Library version string. */
const char* swancond_version(void);

#ifdef __cplusplus
}
#endif

#endif /* SWANCOND_H */
