#ifndef FDSI_FDSI_H
#define FDSI_FDSI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FDSI_API __declspec(dllexport)
#else
#define FDSI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fdsi_status {
  FDSI_OK = 0,
  FDSI_ERR_CONFIG = 1,
  FDSI_ERR_DOMAIN = 2,
  FDSI_ERR_INSUFFICIENT_DATA = 3,
  FDSI_ERR_SINGULAR = 4,
  FDSI_ERR_INFEASIBLE = 5,
  FDSI_ERR_ALIGNMENT = 6,
  FDSI_ERR_IO = 7,
  FDSI_ERR_INVALID_ARGUMENT = 8,
  FDSI_ERR_INTERNAL = 9
} fdsi_status;

typedef struct fdsi_experiment fdsi_experiment;
typedef struct fdsi_table fdsi_table;

FDSI_API const char* fdsi_version(void);
FDSI_API const char* fdsi_status_string(fdsi_status status);

/* Message of the most recent failure on the calling thread; "" if none. */
FDSI_API const char* fdsi_last_error(void);

FDSI_API size_t fdsi_preset_count(void);
FDSI_API const char* fdsi_preset_name(size_t index);

FDSI_API fdsi_status fdsi_experiment_from_preset(const char* name, fdsi_experiment** out);
FDSI_API fdsi_status fdsi_experiment_from_file(const char* path, fdsi_experiment** out);
FDSI_API fdsi_status fdsi_experiment_from_yaml(const char* text, fdsi_experiment** out);
FDSI_API void fdsi_experiment_free(fdsi_experiment* exp);

FDSI_API fdsi_status fdsi_experiment_set_seed(fdsi_experiment* exp, uint64_t seed);
FDSI_API fdsi_status fdsi_experiment_set_realizations(fdsi_experiment* exp, int realizations);
FDSI_API fdsi_status fdsi_experiment_set_threads(fdsi_experiment* exp, unsigned threads);
/* NULL or "" keeps results in memory only. */
FDSI_API fdsi_status fdsi_experiment_set_output_dir(fdsi_experiment* exp, const char* dir);

/* Resolved configuration as YAML; release with fdsi_string_free. */
FDSI_API fdsi_status fdsi_experiment_to_yaml(const fdsi_experiment* exp, char** out);
FDSI_API void fdsi_string_free(char* s);

/*
 * command: "budget", "sweep-tx", "sweep-mn" or "bias". With an output
 * directory set, the CSV (JSON lines for bias), a plot script and a run
 * manifest are written there as well.
 */
FDSI_API fdsi_status fdsi_run(fdsi_experiment* exp, const char* command, fdsi_table** out);

FDSI_API size_t fdsi_table_rows(const fdsi_table* table);
FDSI_API size_t fdsi_table_columns(const fdsi_table* table);
FDSI_API const char* fdsi_table_column_name(const fdsi_table* table, size_t column);
/* Numeric cell value; NaN for text cells or out-of-range indices. */
FDSI_API double fdsi_table_value(const fdsi_table* table, size_t row, size_t column);
/* Cell as printed in the CSV; NULL for out-of-range indices. */
FDSI_API const char* fdsi_table_text(const fdsi_table* table, size_t row, size_t column);
FDSI_API void fdsi_table_free(fdsi_table* table);

/*
 * Widely-linear least-squares fit of y(n) = sum_j h1(j) x(n+k-j) + h2(j) x*(n+k-j).
 * x and y hold n interleaved (re, im) pairs; h1 and h2 receive m pairs each.
 */
FDSI_API fdsi_status fdsi_wl_estimate(const double* x, const double* y, size_t n, int m, int k,
                                      double* h1, double* h2);

#ifdef __cplusplus
}
#endif

#endif
