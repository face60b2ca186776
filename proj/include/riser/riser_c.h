/* C interface to the riser library.
 *
 * Handles are opaque and owned by the caller; free them with the matching
 * *_free function. Strings returned through char** out-parameters are
 * heap-allocated JSON and must be released with riser_string_free.
 * Every function that can fail returns a riser_status; the message for the
 * most recent failure on the calling thread is available from
 * riser_last_error(). */
#ifndef RISER_C_H
#define RISER_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RISER_BUILDING_LIBRARY)
#    define RISER_API __declspec(dllexport)
#  else
#    define RISER_API __declspec(dllimport)
#  endif
#else
#  define RISER_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum riser_status {
  RISER_OK = 0,
  RISER_INVALID_ARGUMENT = 1,
  RISER_VALIDATION = 2, /* bad configuration, malformed CSV, too few records */
  RISER_DIVERGED = 3,   /* non-finite state or stalled Picard iteration */
  RISER_VIOLATION = 4,  /* verify found super-tolerance violations */
  RISER_FAIL = 5,       /* analyze verdict FAIL */
  RISER_IO = 6,
  RISER_INCOMPLETE = 7, /* some sweep points did not complete */
  RISER_INTERNAL = 8
} riser_status;

typedef struct riser_scenario riser_scenario;
typedef struct riser_series riser_series;

RISER_API const char* riser_last_error(void);
RISER_API const char* riser_status_string(riser_status status);
RISER_API void riser_string_free(char* s);

/* Scenarios */
RISER_API riser_status riser_scenario_load(const char* path, riser_scenario** out);
RISER_API riser_status riser_scenario_from_json(const char* json_text, riser_scenario** out);
RISER_API void riser_scenario_free(riser_scenario* scenario);
/* Resolved configuration ("auto" values materialized). */
RISER_API riser_status riser_scenario_to_json(const riser_scenario* scenario, char** out_json);
RISER_API riser_status riser_scenario_fingerprint(const riser_scenario* scenario, char** out);

/* Hypothesis report. `detail` nonzero adds per-sample verdict arrays. */
RISER_API riser_status riser_classify(const riser_scenario* scenario, int detail, char** out_json);

typedef struct riser_run_files {
  const char* csv;        /* NULL: not written */
  const char* summary;    /* NULL: not written */
  const char* checkpoint; /* NULL: no checkpoints */
  const char* restart;    /* NULL: start from the initial data */
} riser_run_files;

/* Runs the scenario. out_summary and out_series may be NULL. */
RISER_API riser_status riser_run(const riser_scenario* scenario, const riser_run_files* files,
                                 char** out_summary, riser_series** out_series);

/* Time series */
RISER_API riser_status riser_series_load_csv(const char* path, riser_series** out);
RISER_API riser_status riser_series_save_csv(const riser_series* series, const char* path);
RISER_API void riser_series_free(riser_series* series);
RISER_API size_t riser_series_length(const riser_series* series);
RISER_API size_t riser_series_columns(void);
RISER_API const char* riser_series_column_name(size_t column);
/* Copies the riser_series_columns() values of one record into `values`. */
RISER_API riser_status riser_series_record(const riser_series* series, size_t index,
                                           double* values);

/* Decay-rate fit and verdict. A NaN tolerance uses the scenario's value.
 * Returns RISER_FAIL (with the JSON filled in) when the verdict is FAIL. */
RISER_API riser_status riser_analyze(const riser_scenario* scenario, const riser_series* series,
                                     double tolerance, char** out_json);

typedef struct riser_verify_options {
  double rho;
  double h;
  size_t nr;
  size_t nphi;
  size_t nz;
  size_t fields;
  uint64_t seed;
  double phi_max;
  double alpha_max;
  int negative_alpha_only;
  unsigned jobs;
} riser_verify_options;

RISER_API void riser_verify_options_default(riser_verify_options* opts);
/* Returns RISER_VIOLATION (with the JSON filled in) on super-tolerance violations. */
RISER_API riser_status riser_verify(const riser_verify_options* opts, char** out_json);

/* Writes out_dir/point_NNN/ and out_dir/sweep.csv. Returns RISER_INCOMPLETE
 * (with the JSON filled in) when a point failed. */
RISER_API riser_status riser_sweep(const riser_scenario* scenario, const char* out_dir,
                                   unsigned jobs, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* RISER_C_H */
