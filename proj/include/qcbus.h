/* qcbus -- qubit-cavity-qubit quantum bus simulator, C API.
 *
 * All entry points return a qcb_status; results come back through opaque
 * handles that the caller frees. On failure the out-parameter is left
 * untouched and qcb_last_error() carries a message for the calling thread.
 */
#ifndef QCBUS_H
#define QCBUS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qcb_status {
    QCB_OK = 0,
    QCB_ERROR_INVALID_ARGUMENT = 1,
    QCB_ERROR_NUMERICAL = 2,
    QCB_ERROR_IO = 3
} qcb_status;

const char* qcb_version(void);
const char* qcb_last_error(void);

/* Run configuration. Keys (string values, CLI flag spellings):
 *   g_min, g_max, steps, window (rect|hamming), xi, protocol (p0|p1|p2),
 *   stage (full|e1|e2), rwa (0|1), q1 (0|1), n_max, n_max_cap, tol, jobs
 */
typedef struct qcb_config qcb_config;

qcb_config* qcb_config_create(void);
void qcb_config_free(qcb_config* config);
qcb_status qcb_config_set(qcb_config* config, const char* key, const char* value);
/* JSON object file with the same keys; values may be strings or numbers. */
qcb_status qcb_config_load_file(qcb_config* config, const char* path);

/* Numeric record table (sweep / fano / converge output). */
typedef struct qcb_result qcb_result;

qcb_status qcb_run_sweep(const qcb_config* config, qcb_result** out);
/* Sweep with per-point timing optimization (protocol P2). */
qcb_status qcb_run_optimize(const qcb_config* config, qcb_result** out);
/* Fano affine-map parameters and structural residuals per grid point. */
qcb_status qcb_run_fano(const qcb_config* config, qcb_result** out);
/* Cutoff-doubling table at one coupling. levels/n_levels may be NULL/0 for
 * the default {8, 16, 32, 64}. */
qcb_status qcb_run_converge(const qcb_config* config, double g, const int* levels,
                            size_t n_levels, qcb_result** out);

size_t qcb_result_rows(const qcb_result* result);
size_t qcb_result_columns(const qcb_result* result);
const char* qcb_result_column_name(const qcb_result* result, size_t column);
qcb_status qcb_result_value(const qcb_result* result, size_t row, size_t column, double* out);
const char* qcb_result_meta(const qcb_result* result, const char* key); /* NULL if absent */
/* format: "csv" or "json" */
qcb_status qcb_result_write(const qcb_result* result, const char* path, const char* format);
void qcb_result_free(qcb_result* result);

/* Elementary-map decomposition report at one coupling. */
typedef struct qcb_report qcb_report;

qcb_status qcb_run_decompose(const qcb_config* config, double g, qcb_report** out);
const char* qcb_report_text(const qcb_report* report);
const char* qcb_report_json(const qcb_report* report);
void qcb_report_free(qcb_report* report);

/* Re-checks the record invariants of an emitted data file. Returns QCB_OK
 * for a clean file; violations are written to message (truncated to
 * message_len, always NUL-terminated when message_len > 0). */
qcb_status qcb_validate_file(const char* path, char* message, size_t message_len);

#ifdef __cplusplus
}
#endif

#endif /* QCBUS_H */
