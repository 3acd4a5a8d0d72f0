#ifndef CRITPATH_H
#define CRITPATH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum CpStatus {
  CP_STATUS_OK = 0,
  CP_STATUS_NULL_ARGUMENT = 1,
  CP_STATUS_INVALID_UTF8 = 2,
  CP_STATUS_PARSE_ERROR = 3,
  CP_STATUS_VALIDATION_ERROR = 4,
  CP_STATUS_INVALID_ARGUMENT = 5,
  CP_STATUS_INVALID_CONFIG = 6,
  CP_STATUS_RENDER_ERROR = 7,
  CP_STATUS_PANIC = 8,
} CpStatus;

/**
 * A validated project network.
 */
typedef struct CpNetwork CpNetwork;

/**
 * The outcome of one solver run.
 */
typedef struct CpResult CpResult;

/**
 * Genetic algorithm parameters; see `cp_ga_config_default`.
 */
typedef struct CpGaConfig {
  size_t population_size;
  double elitism_rate;
  size_t generations;
  size_t iterations;
  uint64_t seed;
} CpGaConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a project document (`critpath v1 <cpm|pert>` format) and validate
 * it. On success `*out` owns a new network.
 *
 * # Safety
 * `text` must be null or a valid NUL-terminated string; `out` must be null
 * or writable.
 */
enum CpStatus cp_network_parse(const char *text, struct CpNetwork **out);

/**
 * Release a network. Null is ignored.
 *
 * # Safety
 * `network` must be null or a pointer from `cp_network_parse` not yet freed.
 */
void cp_network_free(struct CpNetwork *network);

/**
 * Number of events in the network as written, without virtual terminals.
 * Returns 0 for null.
 *
 * # Safety
 * `network` must be null or a live network handle.
 */
size_t cp_network_node_count(const struct CpNetwork *network);

/**
 * Number of activities in the network. Returns 0 for null.
 *
 * # Safety
 * `network` must be null or a live network handle.
 */
size_t cp_network_activity_count(const struct CpNetwork *network);

/**
 * PERT expected time `(a + 4m + b) / 6`. Inputs are rounded to nine
 * decimals and must satisfy `0 <= a <= m <= b`.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum CpStatus cp_expected_duration(double a, double m, double b, double *out);

/**
 * Solve with the exact forward/backward pass engine.
 *
 * # Safety
 * `network` must be null or a live network handle; `out` must be null or
 * writable.
 */
enum CpStatus cp_solve_exact(const struct CpNetwork *network, struct CpResult **out);

/**
 * Default GA parameters: population 32, elitism 0.25, 20 generations,
 * 2 restarts, seed 0.
 */
struct CpGaConfig cp_ga_config_default(void);

/**
 * Solve with the genetic algorithm. A null `config` uses the defaults.
 *
 * # Safety
 * `network` must be null or a live network handle; `config` must be null
 * or readable; `out` must be null or writable.
 */
enum CpStatus cp_solve_ga(const struct CpNetwork *network,
                          const struct CpGaConfig *config,
                          struct CpResult **out);

/**
 * Release a result. Null is ignored.
 *
 * # Safety
 * `result` must be null or a pointer from a `cp_solve_*` call not yet freed.
 */
void cp_result_free(struct CpResult *result);

/**
 * Project duration of a result.
 *
 * # Safety
 * `result` must be null or a live result handle; `out` must be null or
 * writable.
 */
enum CpStatus cp_result_duration(const struct CpResult *result, double *out);

/**
 * Critical path events joined by `-`, virtual terminals omitted.
 *
 * # Safety
 * `result` must be null or a live result handle; `out` must be null or
 * writable. Free `*out` with `cp_string_free`.
 */
enum CpStatus cp_result_path(const struct CpResult *result, char **out);

/**
 * Critical activity names joined by `-`.
 *
 * # Safety
 * Same contract as `cp_result_path`.
 */
enum CpStatus cp_result_activities(const struct CpResult *result, char **out);

/**
 * The result as a JSON object.
 *
 * # Safety
 * Same contract as `cp_result_path`.
 */
enum CpStatus cp_result_to_json(const struct CpResult *result, char **out);

/**
 * Activity table for `result`, computed on `network`.
 *
 * # Safety
 * `network` and `result` must be null or live handles; `out` must be null
 * or writable. Free `*out` with `cp_string_free`.
 */
enum CpStatus cp_emit_table(const struct CpNetwork *network,
                            const struct CpResult *result,
                            char **out);

/**
 * Graphviz DOT for `result`, computed on `network`. Fails with
 * `CP_STATUS_RENDER_ERROR` when the result belongs to a different network.
 *
 * # Safety
 * Same contract as `cp_emit_table`.
 */
enum CpStatus cp_emit_dot(const struct CpNetwork *network,
                          const struct CpResult *result,
                          char **out);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void cp_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next `cp_*` call on the same thread.
 */
const char *cp_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRITPATH_H */
