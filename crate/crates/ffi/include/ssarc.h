#ifndef SSARC_H
#define SSARC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a fallible call.
typedef enum SsarcCode {
  SSARC_CODE_OK = 0,
  SSARC_CODE_NULL_POINTER = 1,
  SSARC_CODE_INVALID_ARGUMENT = 2,
  SSARC_CODE_UNKNOWN_PROBLEM = 3,
  SSARC_CODE_SOLVER_ERROR = 4,
  SSARC_CODE_BUFFER_TOO_SMALL = 5,
  SSARC_CODE_PANIC = 6,
} SsarcCode;

// How a solve ended.
typedef enum SsarcStatus {
  SSARC_STATUS_CONVERGED = 0,
  SSARC_STATUS_LADDER_EXHAUSTED = 1,
  SSARC_STATUS_RANK_DEFICIENT = 2,
  SSARC_STATUS_ITERATION_CAP = 3,
  SSARC_STATUS_EVALUATION_ERROR = 4,
  SSARC_STATUS_BREAKDOWN = 5,
} SsarcStatus;

// Opaque solver settings handle.
typedef struct SsarcConfig SsarcConfig;

// Opaque problem handle.
typedef struct SsarcProblem SsarcProblem;

// Opaque solve result handle.
typedef struct SsarcReport SsarcReport;

// User callbacks. Each returns 0 on success; any other value marks the
// point as not evaluable. Matrices are written row-major.
typedef struct SsarcCallbacks {
  int (*objective)(void *user, const double *x, double *out);
  // Writes `n` entries.
  int (*gradient)(void *user, const double *x, double *out);
  // Writes `m` entries.
  int (*constraints)(void *user, const double *x, double *out);
  // Writes the `m × n` Jacobian.
  int (*jacobian)(void *user, const double *x, double *out);
  // Writes the `n × n` Hessian of `f - sᵀc`.
  int (*lagrangian_hessian)(void *user, const double *x, const double *s, double *out);
} SsarcCallbacks;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next call into the library from the same thread.
const char *ssarc_last_error(void);

// Library version as a static string.
const char *ssarc_version(void);

// Default settings.
struct SsarcConfig *ssarc_config_new(void);

// # Safety
// `config` must come from [`ssarc_config_new`] and not be freed twice.
void ssarc_config_free(struct SsarcConfig *config);

// Sets a numeric setting by field name, e.g. `"beta0"` or `"max_outer"`.
// Boolean fields take 0 or 1.
//
// # Safety
// `config` must be a live handle and `name` a NUL-terminated string.
enum SsarcCode ssarc_config_set(struct SsarcConfig *config, const char *name, double value);

// Reads a numeric setting by field name into `out`.
//
// # Safety
// `config` must be a live handle, `name` NUL-terminated, `out` writable.
enum SsarcCode ssarc_config_get(const struct SsarcConfig *config, const char *name, double *out);

// Looks up a built-in problem by name (case-insensitive).
//
// # Safety
// `name` must be NUL-terminated and `out` writable.
enum SsarcCode ssarc_problem_builtin(const char *name, struct SsarcProblem **out);

// Builds a problem from callbacks. `x0` holds `n` values and is copied.
// `constraints` and `jacobian` may be null when `m == 0`.
//
// # Safety
// Pointers must be valid for the stated lengths; `user` is passed through
// untouched and must outlive the problem handle.
enum SsarcCode ssarc_problem_new(const char *name,
                                 size_t n,
                                 size_t m,
                                 const double *x0,
                                 const struct SsarcCallbacks *callbacks,
                                 void *user,
                                 struct SsarcProblem **out);

// # Safety
// `problem` must come from this library and not be freed twice.
void ssarc_problem_free(struct SsarcProblem *problem);

// Number of variables, or 0 for a null handle.
//
// # Safety
// `problem` must be null or a live handle.
size_t ssarc_problem_n(const struct SsarcProblem *problem);

// Number of constraints, or 0 for a null handle.
//
// # Safety
// `problem` must be null or a live handle.
size_t ssarc_problem_m(const struct SsarcProblem *problem);

// Solves `problem`. A null `config` means defaults. A run that stops
// without converging still returns [`SsarcCode::Ok`]; inspect the report's
// status.
//
// # Safety
// Handles must be live; `out` writable.
enum SsarcCode ssarc_solve(const struct SsarcProblem *problem,
                           const struct SsarcConfig *config,
                           struct SsarcReport **out);

// # Safety
// `report` must come from [`ssarc_solve`] and not be freed twice.
void ssarc_report_free(struct SsarcReport *report);

// # Safety
// `report` must be a live handle.
enum SsarcStatus ssarc_report_status(const struct SsarcReport *report);

// Accepted steps.
//
// # Safety
// `report` must be a live handle.
size_t ssarc_report_nit(const struct SsarcReport *report);

// Function evaluations.
//
// # Safety
// `report` must be a live handle.
size_t ssarc_report_nif(const struct SsarcReport *report);

// Gradient evaluations.
//
// # Safety
// `report` must be a live handle.
size_t ssarc_report_nig(const struct SsarcReport *report);

// Final `max(‖Zᵀg‖, ‖c‖)`.
//
// # Safety
// `report` must be a live handle.
double ssarc_report_res(const struct SsarcReport *report);

// Copies the final point into `buf`, which must hold at least `len` values.
//
// # Safety
// `report` must be a live handle and `buf` valid for `len` writes.
enum SsarcCode ssarc_report_x(const struct SsarcReport *report, double *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SSARC_H */
