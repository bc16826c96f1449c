/* C API for the systemic-risk market laboratory.
 *
 * All entry points return an sr_status; 0 is success. On failure,
 * sr_last_error() returns a thread-local description of what went wrong.
 * Objects are opaque handles owned by the caller and released with the
 * matching _free function. The library is safe to use from multiple threads
 * as long as each handle is confined to one thread at a time.
 */
#ifndef SYSRISK_SYSRISK_H
#define SYSRISK_SYSRISK_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int sr_status;

/* Mirrors the library's internal error codes. */
enum {
    SR_OK = 0,
    SR_ERR_CONFIG = 1,
    SR_ERR_UNKNOWN_KEY = 2,
    SR_ERR_IO = 3,
    SR_ERR_EQUILIBRIUM = 4,
    SR_ERR_DIVERGENT_COUPLING = 5,
    SR_ERR_GRID_TOO_COARSE = 6,
    SR_ERR_INSUFFICIENT_TAIL = 7,
    SR_ERR_EMPTY_REGIME = 8,
    SR_ERR_WINDOW_TOO_LONG = 9,
    SR_ERR_NUMERICAL_BLOWUP = 10,
    SR_ERR_DOMAIN = 11,
    SR_ERR_INTERNAL = 12,
};

typedef struct sr_config sr_config;
typedef struct sr_report sr_report;

const char* sr_version(void);

/* Thread-local message set by the last failing call on this thread. */
const char* sr_last_error(void);

/* Configuration ----------------------------------------------------------- */

/* Baseline calibration defaults. */
sr_status sr_config_create(sr_config** out);

/* Plain-text key=value file; an empty file means full defaults. */
sr_status sr_config_load(const char* path, sr_config** out);

/* Apply one key=value assignment (same keys as the config file). */
sr_status sr_config_set(sr_config* config, const char* key, const char* value);

/* Re-validate all invariants; returns SR_ERR_CONFIG with a message naming
 * the offending field. */
sr_status sr_config_validate(const sr_config* config);

/* FNV-1a hash of the canonical serialization (embedded in all outputs). */
sr_status sr_config_hash(const sr_config* config, uint64_t* out);

void sr_config_free(sr_config* config);

/* Experiments -------------------------------------------------------------- */

/* Newline-separated "name - description" list of runnable experiments. */
const char* sr_experiment_list(void);

typedef struct sr_run_options {
    const char* experiment; /* e.g. "tail-grid"; NULL: use the config's value */
    uint64_t master_seed;
    const char* out_dir;    /* artifacts directory; NULL or "": no files written */
    int jobs;               /* worker threads; <= 1: serial */
    int full_horizon;       /* 0: reduced (T = 1,260), 1: full (T = 5,040) */
} sr_run_options;

/* Run an experiment end to end; writes cells.csv, summary.json, report.txt
 * and manifest.json under out_dir/<experiment>/ when out_dir is set. */
sr_status sr_run_experiment(const sr_config* config, const sr_run_options* options,
                            sr_report** out);

/* Report accessors; strings remain owned by the report handle. */
const char* sr_report_summary_json(const sr_report* report);
const char* sr_report_table(const sr_report* report);
int sr_report_bands_pass(const sr_report* report);
void sr_report_free(sr_report* report);

/* Closed-form battery (no simulation). *failures receives the count of
 * failed checks; the returned report's table holds one line per check. */
sr_status sr_check_analytic(sr_report** out, int* failures);

/* Closed-form evaluators --------------------------------------------------- */

sr_status sr_kyle_lambda(const sr_config* config, double phi, double rho, double* out);
sr_status sr_effective_lambda(const sr_config* config, double phi, double rho,
                              double beta, double* out);
sr_status sr_coupling_r(const sr_config* config, double phi, double rho, double beta,
                        double* out);
sr_status sr_multiplier_m(double r, double* out);
sr_status sr_ami_index(double phi_hat, double rho_hat, double beta_hat, double* out);

#ifdef __cplusplus
}
#endif

#endif /* SYSRISK_SYSRISK_H */
