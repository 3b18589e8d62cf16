/* C interface to the pqscp library: maximal weights of strictly chained (p,q)-ary partitions. */

#ifndef PQSCP_H
#define PQSCP_H

/* Generated by cbindgen from the pqscp-capi sources; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a call. Everything except `PQSCP_STATUS_OK` leaves the
// output parameters untouched; the failure detail is readable through
// `pqscp_solver_last_error`.
typedef enum PqscpStatus {
  // Success.
  PQSCP_STATUS_OK = 0,
  // A numeric argument is outside its domain (for example `m = 0`).
  PQSCP_STATUS_OUT_OF_RANGE = 1,
  // `p` and `q` are powers of a common base, so the theory collapses.
  PQSCP_STATUS_DEPENDENT_BASES = 2,
  // An enumeration exceeded its cap.
  PQSCP_STATUS_CAP_EXCEEDED = 3,
  // An internal iteration budget was exhausted before convergence.
  PQSCP_STATUS_BUDGET_EXCEEDED = 4,
  // Malformed input, for example a non-decimal `m` string.
  PQSCP_STATUS_INVALID_INPUT = 5,
  // A required pointer argument was NULL.
  PQSCP_STATUS_NULL_POINTER = 6,
  // An internal invariant failed; the solver is still usable.
  PQSCP_STATUS_PANIC = 7,
} PqscpStatus;

// Opaque solver state: the base pair plus the lazily extended
// continued-fraction table shared by all queries.
typedef struct PqscpSolver PqscpSolver;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a solver for the base pair `(p, q)` and stores it in
// `out_solver`. Returns `PQSCP_STATUS_OK` on success.
//
// # Safety
//
// `out_solver` must be a valid pointer. The returned handle must be
// released with `pqscp_solver_free`.
enum PqscpStatus pqscp_solver_new(uint64_t p, uint64_t q, struct PqscpSolver **out_solver);

// Releases a solver created by `pqscp_solver_new`. A NULL handle is a
// no-op.
//
// # Safety
//
// `solver` must be NULL or a handle returned by `pqscp_solver_new` that
// has not been freed already.
void pqscp_solver_free(struct PqscpSolver *solver);

// The failure message of the most recent call on this solver, or NULL if
// that call succeeded. The pointer stays valid until the next call on the
// same solver.
//
// # Safety
//
// `solver` must be a live handle from `pqscp_solver_new`.
const char *pqscp_solver_last_error(const struct PqscpSolver *solver);

// Computes the maximal weight `G(m)` and stores it as a freshly allocated
// decimal string in `out_value` (release it with `pqscp_string_free`).
//
// # Safety
//
// `solver` must be a live handle, `m_decimal` a NUL-terminated string,
// and `out_value` a valid pointer.
enum PqscpStatus pqscp_g(struct PqscpSolver *solver, const char *m_decimal, char **out_value);

// Computes `G(m)` with the frontier-scan oracle instead of the fast walk;
// meant for cross-checking bindings. Output contract matches `pqscp_g`.
//
// # Safety
//
// As for `pqscp_g`.
enum PqscpStatus pqscp_g_oracle(struct PqscpSolver *solver,
                                const char *m_decimal,
                                char **out_value);

// Computes the largest frontier part `z_m = p^a q^b`: the exponents go to
// `out_a` / `out_b` and the value, as a decimal string to be released
// with `pqscp_string_free`, to `out_value`.
//
// # Safety
//
// `solver` must be a live handle, `m_decimal` a NUL-terminated string,
// and the three output pointers valid.
enum PqscpStatus pqscp_z(struct PqscpSolver *solver,
                         const char *m_decimal,
                         uint64_t *out_a,
                         uint64_t *out_b,
                         char **out_value);

// Computes the smallest maximal-weight witness `y_m = p^a q^b`; output
// contract matches `pqscp_z`.
//
// # Safety
//
// As for `pqscp_z`.
enum PqscpStatus pqscp_y(struct PqscpSolver *solver,
                         const char *m_decimal,
                         uint64_t *out_a,
                         uint64_t *out_b,
                         char **out_value);

// Computes the boundary exponent `ell_b`.
//
// # Safety
//
// `solver` must be a live handle and `out_ell` a valid pointer.
enum PqscpStatus pqscp_ell(struct PqscpSolver *solver, uint64_t b, uint64_t *out_ell);

// Computes `m_ell`, the largest `b` whose boundary exponent still fits
// under `m` (the budget of the `y` walk).
//
// # Safety
//
// `solver` must be a live handle, `m_decimal` a NUL-terminated string,
// and `out_m_ell` a valid pointer.
enum PqscpStatus pqscp_m_ell(struct PqscpSolver *solver,
                             const char *m_decimal,
                             uint64_t *out_m_ell);

// Runs the full-budget walk for `m` and reports how many iterations it
// used next to the theoretical bound `2 + floor(log2 log_q m)`.
//
// # Safety
//
// `solver` must be a live handle, `m_decimal` a NUL-terminated string,
// and the output pointers valid.
enum PqscpStatus pqscp_walk_iterations(struct PqscpSolver *solver,
                                       const char *m_decimal,
                                       uint64_t *out_iterations,
                                       uint64_t *out_bound);

// Releases a string allocated by this library. A NULL pointer is a no-op.
//
// # Safety
//
// `s` must be NULL or a string returned by this library that has not
// been freed already.
void pqscp_string_free(char *s);

// The library version as a static string; do not free it.
const char *pqscp_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PQSCP_H */
