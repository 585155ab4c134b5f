/* C interface to the rmstscreen library.
 *
 * Every function returns an rs_status. On failure a description is kept
 * per thread and can be read with rs_last_error() until the next call.
 * Objects are opaque handles released with their matching *_free function.
 * Strings returned through char** are owned by the caller and released
 * with rs_string_free. Feature indices are 0-based.
 */
#ifndef RMSTSCREEN_H
#define RMSTSCREEN_H

#include <stddef.h>
#include <stdint.h>

#if defined(RS_BUILDING_LIBRARY)
#define RS_API __attribute__((visibility("default")))
#else
#define RS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rs_status {
  RS_OK = 0,
  RS_ERR_INVALID_ARGUMENT,
  RS_ERR_MISSING_FILE,
  RS_ERR_MISSING_COLUMN,
  RS_ERR_NON_NUMERIC_CELL,
  RS_ERR_MISSING_VALUE,
  RS_ERR_INVALID_STATUS,
  RS_ERR_NEGATIVE_TIME,
  RS_ERR_NO_EVENTS,
  RS_ERR_INVERTED_INTERVAL,
  RS_ERR_NO_FINITE_INTERVALS,
  RS_ERR_SHAPE_MISMATCH,
  RS_ERR_CONSTANT_COVARIATE,
  RS_ERR_DEGENERATE_COLUMN,
  RS_ERR_UNKNOWN_SCENARIO,
  RS_ERR_UNATTAINABLE,
  RS_ERR_NUMERICAL,
  RS_ERR_IO,
  RS_ERR_INTERNAL
} rs_status;

RS_API const char* rs_version(void);
RS_API const char* rs_status_name(rs_status status);
/* Nonzero when the status stems from bad input (data, files, arguments). */
RS_API int rs_is_input_error(rs_status status);
RS_API const char* rs_last_error(void);
RS_API void rs_string_free(char* s);

/* Right-censored data. */
typedef struct rs_dataset rs_dataset;
RS_API rs_status rs_dataset_load_csv(const char* path, const char* time_col,
                                     const char* status_col, rs_dataset** out);
RS_API rs_status rs_dataset_from_arrays(const double* covariates_row_major, size_t n, size_t p,
                                        const double* time, const int* status, rs_dataset** out);
RS_API size_t rs_dataset_rows(const rs_dataset* ds);
RS_API size_t rs_dataset_cols(const rs_dataset* ds);
RS_API void rs_dataset_free(rs_dataset* ds);

/* Interval-censored data (experimental); an empty cell or "inf" in the
 * right column marks a right-censored row. */
typedef struct rs_interval_dataset rs_interval_dataset;
RS_API rs_status rs_interval_dataset_load_csv(const char* path, const char* left_col,
                                              const char* right_col, rs_interval_dataset** out);
RS_API void rs_interval_dataset_free(rs_interval_dataset* ds);

typedef struct rs_screen_options {
  size_t min_stratum_size; /* default 6 */
  size_t selected_size;    /* 0 = floor(n / ln n) */
  size_t workers;          /* 0 = all hardware threads */
} rs_screen_options;

RS_API rs_screen_options rs_screen_options_default(void);

typedef struct rs_screen_result rs_screen_result;
RS_API rs_status rs_screen(const rs_dataset* ds, const rs_screen_options* options,
                           rs_screen_result** out);
RS_API rs_status rs_screen_interval(const rs_interval_dataset* ds,
                                    const rs_screen_options* options, rs_screen_result** out);
RS_API size_t rs_screen_result_size(const rs_screen_result* r);
RS_API rs_status rs_screen_result_stat(const rs_screen_result* r, size_t feature, double* d,
                                       double* d1, double* d2);
/* Copies up to `capacity` ranked feature indices; *count receives the total. */
RS_API rs_status rs_screen_result_ranking(const rs_screen_result* r, size_t* out, size_t capacity,
                                          size_t* count);
RS_API rs_status rs_screen_result_selected(const rs_screen_result* r, size_t* out,
                                           size_t capacity, size_t* count);
RS_API rs_status rs_screen_result_write_csv(const rs_screen_result* r, const char* path);
RS_API rs_status rs_screen_result_summary_json(const rs_screen_result* r, char** out);
RS_API void rs_screen_result_free(rs_screen_result* r);

typedef struct rs_iterate_options {
  size_t q;                /* 0 = floor(n / 2) */
  size_t max_iterations;   /* default 20 */
  size_t min_stratum_size; /* default 6 */
  size_t step_size;        /* per-step screening size; 0 = floor(n / ln n) */
  size_t cvl_grid_size;    /* default 50 */
  size_t cvl_folds;        /* default 5 */
  uint64_t seed;           /* default 1 */
  size_t workers;
} rs_iterate_options;

RS_API rs_iterate_options rs_iterate_options_default(void);

typedef struct rs_iterate_result rs_iterate_result;
RS_API rs_status rs_iterate(const rs_dataset* ds, const rs_iterate_options* options,
                            rs_iterate_result** out);
RS_API rs_status rs_iterate_result_selected(const rs_iterate_result* r, size_t* out,
                                            size_t capacity, size_t* count);
RS_API size_t rs_iterate_result_iterations(const rs_iterate_result* r);
/* feature,index,marginal_rank for each selected feature. */
RS_API rs_status rs_iterate_result_write_csv(const rs_iterate_result* r, const char* path);
RS_API rs_status rs_iterate_result_trace_json(const rs_iterate_result* r, char** out);
RS_API void rs_iterate_result_free(rs_iterate_result* r);

typedef struct rs_scenario_spec {
  const char* scenario; /* "S1".."S5", "toy-i".."toy-vi" */
  size_t n;
  size_t p;
  const char* error;      /* "normal", "extreme", "logistic" */
  double censoring;       /* target censoring rate in [0, 1) */
  double rho;             /* NaN = default 0.5 */
  double c;               /* toy coefficient; NaN = model default */
  uint64_t seed;
} rs_scenario_spec;

RS_API rs_scenario_spec rs_scenario_spec_default(void);

typedef struct rs_simulation rs_simulation;
RS_API rs_status rs_simulate(const rs_scenario_spec* spec, rs_simulation** out);
/* Interval-censored draw on the unit inspection grid (experimental). */
RS_API rs_status rs_simulate_interval(const rs_scenario_spec* spec, rs_simulation** out);
RS_API rs_status rs_simulation_write_csv(const rs_simulation* sim, const char* path);
RS_API rs_status rs_simulation_sidecar_json(const rs_simulation* sim, char** out);
RS_API void rs_simulation_free(rs_simulation* sim);

typedef struct rs_bench_options {
  const char* method; /* "marginal", "iterative", "interval" */
  size_t reps;
  uint64_t seed;
  size_t workers;
  size_t min_stratum_size;
  size_t selected_size; /* 0 = floor(n / ln n) */
  size_t q;             /* iterative only; 0 = floor(n / 2) */
  size_t max_iterations;
} rs_bench_options;

RS_API rs_bench_options rs_bench_options_default(void);

typedef struct rs_bench_report rs_bench_report;
RS_API rs_status rs_bench(const rs_scenario_spec* spec, const rs_bench_options* options,
                          rs_bench_report** out);
RS_API double rs_bench_report_p_all(const rs_bench_report* r);
/* Median and IQR of the minimum model size; NaN for the iterative method. */
RS_API double rs_bench_report_median(const rs_bench_report* r);
RS_API double rs_bench_report_iqr(const rs_bench_report* r);
RS_API rs_status rs_bench_report_json(const rs_bench_report* r, char** out);
RS_API rs_status rs_bench_report_table(const rs_bench_report* r, char** out);
RS_API void rs_bench_report_free(rs_bench_report* r);

typedef struct rs_exceedance {
  double d;
  double d1;
  double d2;
  double c;
  size_t reps;
} rs_exceedance;

/* Uses spec->scenario (a toy model), spec->n, spec->censoring and spec->c. */
RS_API rs_status rs_toy_exceedance(const rs_scenario_spec* spec, size_t reps, uint64_t seed,
                                   size_t workers, rs_exceedance* out, char** json,
                                   char** table);

#ifdef __cplusplus
}
#endif

#endif
