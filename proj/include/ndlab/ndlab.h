/* C interface to the neighbor-discovery analysis library.
 *
 * All times are integer ticks of the protocol's time base. Strings returned
 * through char** out-parameters are owned by the caller and must be released
 * with nd_string_free. On failure the out-parameters are left untouched and
 * nd_last_error() describes the problem (thread-local). */
#ifndef NDLAB_H
#define NDLAB_H

#include <stdint.h>

#if defined(_WIN32)
#define ND_API __declspec(dllexport)
#else
#define ND_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct nd_protocol nd_protocol;

typedef enum nd_status {
  ND_OK = 0,
  ND_ERR_INVALID_ARGUMENT = 1,
  ND_ERR_DOMAIN = 2,
  ND_ERR_INFEASIBLE = 3,
  ND_ERR_HYPERPERIOD_TOO_LARGE = 4,
  ND_ERR_NEEDS_FINER_TICKS = 5,
  ND_ERR_MISALIGNED_PERIODS = 6,
  ND_ERR_HORIZON_OVERFLOW = 7,
  ND_ERR_PARSE = 8,
  ND_ERR_INTERNAL = 9
} nd_status;

ND_API const char* nd_status_name(nd_status status);
ND_API const char* nd_last_error(void);
/* Numeric payload of the last error, e.g. the hyper-period that was too large. */
ND_API int64_t nd_last_error_value(void);

ND_API void nd_string_free(char* s);

ND_API nd_status nd_protocol_from_json(const char* json, nd_protocol** out);
ND_API nd_status nd_protocol_to_json(const nd_protocol* p, char** out);
ND_API void nd_protocol_free(nd_protocol* p);

/* kind: "optimal", "pi0m", "disco", "searchlight", "uconnect", "diffcode".
 * params_json carries the generator inputs plus an optional "radio" object and
 * "tick_ns"; see the README for the field list. */
ND_API nd_status nd_generate(const char* kind, const char* params_json, nd_protocol** out);

/* Correlated pair for mutual exclusive one-way discovery: params
 * {"M": even >= 4, "d": odd ticks, "radio": {...}}. *zeta receives the
 * beacon-to-window distance. */
ND_API nd_status nd_generate_quadruple(const char* params_json, nd_protocol** e, nd_protocol** f, int64_t* zeta);

/* Coverage analysis, exact worst-case latency and the matching bound for tx
 * beaconing towards rx. options_json may be NULL or
 * {"method": "endpoint"|"full", "max_hyperperiod": int, "threads": int}. */
ND_API nd_status nd_analyze(const nd_protocol* tx, const nd_protocol* rx, const char* options_json,
                            char** report_json);

/* Rows beacon_index,interval_start,interval_end for the beacon prefix used by
 * nd_analyze. */
ND_API nd_status nd_coverage_csv(const nd_protocol* tx, const nd_protocol* rx, char** csv);

/* Mutual exclusive one-way determinism of a correlated pair. */
ND_API nd_status nd_check_quadruple(const nd_protocol* e, const nd_protocol* f, int64_t zeta, char** report_json);

/* Single bound evaluation; name and params are listed in the README. */
ND_API nd_status nd_bound(const char* name, const char* params_json, char** result_json);

/* {"eta_from","eta_to","eta_step","omega","alpha","beta_m"} -> CSV */
ND_API nd_status nd_bounds_sweep_csv(const char* params_json, char** csv);

/* {"lo","hi","beta_steps","omega","d_oTx","d_oRx"} -> CSV, plus summary JSON
 * with the deviation range when summary_json is non-NULL. */
ND_API nd_status nd_deviation_csv(const char* params_json, char** csv, char** summary_json);

/* {"devices": [protocol...], "trials", "seed", "horizon", "deadline",
 *  "sampling": "uniform"|"exhaustive", "threads"} */
ND_API nd_status nd_simulate(const char* config_json, char** trials_csv, char** summary_json);

ND_API nd_status nd_collision_probability(int64_t senders, double beta, double* out);

/* Blocked share of listening time: analytic value and replayed measurement. */
ND_API nd_status nd_self_blocking(const nd_protocol* p, double* analytic, double* measured);

#ifdef __cplusplus
}
#endif

#endif /* NDLAB_H */
