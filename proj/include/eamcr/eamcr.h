/*
 * eamcr — energy-aware adaptive model selection: profiles, battery
 * simulation, and policy comparison behind a plain C interface.
 *
 * Every function returns an eamcr_status; on failure a human-readable
 * message is available from eamcr_last_error() (thread-local). Objects are
 * opaque handles released with their matching *_free function. Strings
 * returned through char** out-parameters are heap copies released with
 * eamcr_string_free().
 */
#ifndef EAMCR_H
#define EAMCR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define EAMCR_VERSION "1.0.0"

typedef enum eamcr_status {
    EAMCR_OK = 0,
    EAMCR_E_IO = 1,
    EAMCR_E_PARSE = 2,
    EAMCR_E_VALIDATION = 3,
    EAMCR_E_DOMAIN = 4,
    EAMCR_E_UNKNOWN_TASK = 5,
    EAMCR_E_NO_CANDIDATES = 6,
    EAMCR_E_UNKNOWN_MODEL = 7,
    EAMCR_E_DIMENSION = 8,
    EAMCR_E_EMPTY = 9,
    EAMCR_E_INFEASIBLE = 10,
    EAMCR_E_USAGE = 11,
    EAMCR_E_INVALID_ARG = 12,
    EAMCR_E_INTERNAL = 13
} eamcr_status;

typedef struct eamcr_profiles eamcr_profiles;
typedef struct eamcr_scenario eamcr_scenario;
typedef struct eamcr_sim_result eamcr_sim_result;
typedef struct eamcr_comparison eamcr_comparison;

const char* eamcr_version(void);
const char* eamcr_status_name(eamcr_status status);

/* Message describing the most recent failure on this thread ("" if none). */
const char* eamcr_last_error(void);

void eamcr_string_free(char* s);

/* ---- profiles ---------------------------------------------------------- */

eamcr_status eamcr_profiles_load(const char* path, eamcr_profiles** out);

/* Structural parse without value validation; pair with
 * eamcr_profiles_validate to list every diagnostic. */
eamcr_status eamcr_profiles_parse(const char* path, eamcr_profiles** out);

void eamcr_profiles_free(eamcr_profiles* profiles);

/* Newline-separated diagnostics ("" when clean). Counts may be NULL. */
eamcr_status eamcr_profiles_validate(const eamcr_profiles* profiles, char** report_out,
                                     int* error_count, int* warning_count);

/* CSV: model,accelerator,accuracy,mean_energy_mwh,dlei */
eamcr_status eamcr_dlei_table_csv(const eamcr_profiles* profiles, const char* task,
                                  char** csv_out);

/* ---- scenarios & simulation -------------------------------------------- */

eamcr_status eamcr_scenario_load(const char* path, eamcr_scenario** out);
void eamcr_scenario_free(eamcr_scenario* scenario);
eamcr_status eamcr_scenario_set_seed(eamcr_scenario* scenario, uint64_t seed);
int eamcr_scenario_policy_count(const eamcr_scenario* scenario);

/* Runs one policy of the scenario (by list index). */
eamcr_status eamcr_simulate(const eamcr_profiles* profiles, const eamcr_scenario* scenario,
                            int policy_index, eamcr_sim_result** out);
void eamcr_sim_result_free(eamcr_sim_result* result);
eamcr_status eamcr_sim_result_json(const eamcr_sim_result* result, char** out);
/* CSV: timestamp_s,remaining_mah,active_model */
eamcr_status eamcr_sim_result_series_csv(const eamcr_sim_result* result, char** out);
eamcr_status eamcr_sim_result_svg(const eamcr_sim_result* result, char** out);

/* Runs every policy of the scenario (two or more) against the identical
 * workload and initial battery. */
eamcr_status eamcr_compare(const eamcr_profiles* profiles, const eamcr_scenario* scenario,
                           eamcr_comparison** out);
void eamcr_comparison_free(eamcr_comparison* comparison);
eamcr_status eamcr_comparison_json(const eamcr_comparison* comparison, char** out);
/* CSV: policy,operating_time_s,inference_count,utility,mean_dlei */
eamcr_status eamcr_comparison_summary_csv(const eamcr_comparison* comparison, char** out);
eamcr_status eamcr_comparison_svg(const eamcr_comparison* comparison, char** out);

/* ---- formulas ----------------------------------------------------------- */

/* power_mw * latency_ms / 1000, millijoules. */
eamcr_status eamcr_energy_per_inference_mj(double power_mw, double latency_ms, double* out);

/* accuracy per mWh of demand; accuracy in [0,1], energy_mj > 0. */
eamcr_status eamcr_dlei(double accuracy, double energy_mj, double* out);

/* remaining_mah / effective_discharge_ma, hours. */
eamcr_status eamcr_estimated_usage_time_h(double remaining_mah, double effective_discharge_ma,
                                          double* out);

/* Set-overlap of two width*height row-major masks (nonzero = set). */
eamcr_status eamcr_jaccard_index(uint32_t width, uint32_t height, const uint8_t* x,
                                 const uint8_t* y, double* out);

#ifdef __cplusplus
}
#endif

#endif /* EAMCR_H */
