#ifndef MHDES_H
#define MHDES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MhdesStatus {
  MHDES_STATUS_OK = 0,
  MHDES_STATUS_NULL_POINTER = 1,
  MHDES_STATUS_INVALID_ARGUMENT = 2,
  MHDES_STATUS_DOMAIN = 3,
  MHDES_STATUS_CONSISTENCY = 4,
  MHDES_STATUS_OVERFLOW = 5,
  MHDES_STATUS_NO_REAL_EIGENVALUE = 6,
  MHDES_STATUS_NUMERICAL = 7,
  MHDES_STATUS_PANIC = 8,
} MhdesStatus;

typedef enum MhdesFlow {
  MHDES_FLOW_COUETTE = 0,
  MHDES_FLOW_HARTMANN = 1,
} MhdesFlow;

/**
 * Opaque solver state for one `(flow, Ha, Pm, N)`.
 */
typedef struct MhdesProblem MhdesProblem;

/**
 * Result of a critical-point search.
 */
typedef struct MhdesNeutralPoint {
  double a_crit;
  double re_e;
  /**
   * Nonzero unless the minimum sits on the edge of the search window.
   */
  int32_t converged;
} MhdesNeutralPoint;

/**
 * Creates a problem handle. `flow` is an [`MhdesFlow`] value.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle pointer.
 */
enum MhdesStatus mhdes_problem_new(int32_t flow,
                                   double ha,
                                   double pm,
                                   size_t n,
                                   struct MhdesProblem **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `problem` must be null or a handle from [`mhdes_problem_new`] that has not
 * been freed.
 */
void mhdes_problem_free(struct MhdesProblem *problem);

/**
 * Largest eigenvalue `m(a)`; the energy Reynolds number at `a` is `1/m`.
 *
 * # Safety
 * `problem` must be a live handle and `m_out` writable.
 */
enum MhdesStatus mhdes_problem_solve(const struct MhdesProblem *problem, double a, double *m_out);

/**
 * `Re(a)` at `len` wavenumbers. Failed points are written as NaN and the
 * call still succeeds.
 *
 * # Safety
 * `a` and `re_out` must each point to `len` elements.
 */
enum MhdesStatus mhdes_problem_curve(const struct MhdesProblem *problem,
                                     const double *a,
                                     size_t len,
                                     double *re_out);

/**
 * Minimum of `Re(a)` over `[a_min, a_max]`.
 *
 * # Safety
 * `problem` must be a live handle and `out` writable.
 */
enum MhdesStatus mhdes_problem_neutral(const struct MhdesProblem *problem,
                                       double a_min,
                                       double a_max,
                                       struct MhdesNeutralPoint *out);

/**
 * Richardson-extrapolated finite-difference estimate of `m(a)` from `points`
 * and `2 points` interior grid points.
 *
 * # Safety
 * `m_out` must be writable.
 */
enum MhdesStatus mhdes_fd_oracle(int32_t flow,
                                 double ha,
                                 double pm,
                                 double a,
                                 size_t points,
                                 double *m_out);

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *mhdes_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mhdes_version(void);

#endif  /* MHDES_H */
