/* C API of the heatctl library: null-control construction for the 1D
 * semilinear heat equation with forward verification.
 *
 * All objects are opaque handles. Functions returning int give 0 on
 * success and a nonzero error code otherwise; heatctl_last_error() holds
 * a thread-local message for the most recent failure. Run status values
 * (converged/diverged/maxiter) are results, not errors.
 */
#ifndef HEATCTL_H
#define HEATCTL_H

#ifdef __cplusplus
extern "C" {
#endif

#define HEATCTL_OK 0
#define HEATCTL_ERR_CONFIG 4
#define HEATCTL_ERR_INTERNAL 5

#define HEATCTL_STATUS_CONVERGED 0
#define HEATCTL_STATUS_DIVERGED 2
#define HEATCTL_STATUS_MAXITER 3

typedef struct heatctl_config_s heatctl_config;
typedef struct heatctl_run_s heatctl_run;
typedef struct heatctl_check_s heatctl_check;

const char* heatctl_version(void);

/* Thread-local message describing the last failure in this thread. */
const char* heatctl_last_error(void);

/* ---- configuration ---------------------------------------------------- */

heatctl_config* heatctl_config_create(void);
void heatctl_config_destroy(heatctl_config* cfg);

/* Load a flat key=value file on top of the current values. */
int heatctl_config_load_file(heatctl_config* cfg, const char* path);

/* Apply one override, either as key/value or as a single "key=value". */
int heatctl_config_set(heatctl_config* cfg, const char* key,
                       const char* value);
int heatctl_config_set_kv(heatctl_config* cfg, const char* keyval);

/* Write the resolved configuration to buf (truncated if needed); returns
 * the number of bytes that would be required. */
int heatctl_config_dump(const heatctl_config* cfg, char* buf, int buflen);

/* Static description of every config key, suitable for --help output. */
const char* heatctl_config_keys(void);

/* ---- runs -------------------------------------------------------------- */

/* variant: "ls", "newton" or "picard". threads <= 0 picks the hardware
 * count. Returns NULL on error. */
heatctl_run* heatctl_run_execute(const heatctl_config* cfg,
                                 const char* variant, int threads);
void heatctl_run_destroy(heatctl_run* run);

/* HEATCTL_STATUS_* value of a finished run. */
int heatctl_run_status(const heatctl_run* run);

int heatctl_run_record_count(const heatctl_run* run);

/* Copies record idx as [k, rel_dy, rel_df, norm_y, norm_f, sqrt2E,
 * lambda] into out[7]. */
int heatctl_run_record(const heatctl_run* run, int idx, double out[7]);

/* Terminal-state verification ratio ||y(T)||/||u0|| from the independent
 * forward solver; only available for converged ls/newton runs. Returns
 * HEATCTL_ERR_INTERNAL when not available. */
int heatctl_run_forward_ratio(const heatctl_run* run, double* ratio);

int heatctl_run_write_csv(const heatctl_run* run, const char* path);
int heatctl_run_write_records(const heatctl_run* run, const char* path);
int heatctl_run_write_report(const heatctl_run* run, const char* path);

/* Re-emit a table.csv from a stored records file. */
int heatctl_table_from_records(const char* records_path,
                               const char* csv_path);

/* ---- property-check suite ---------------------------------------------- */

heatctl_check* heatctl_check_execute(const heatctl_config* cfg, int threads);
void heatctl_check_destroy(heatctl_check* chk);
int heatctl_check_passed(const heatctl_check* chk); /* 1 pass, 0 fail */
const char* heatctl_check_text(const heatctl_check* chk);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HEATCTL_H */
