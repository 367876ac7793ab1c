#ifndef RIEMANN_THETA_H
#define RIEMANN_THETA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes.
typedef enum ThetaStatus {
  THETA_STATUS_OK = 0,
  THETA_STATUS_NULL_POINTER = 1,
  THETA_STATUS_INVALID_INPUT = 2,
  THETA_STATUS_NOT_POSITIVE_DEFINITE = 3,
  THETA_STATUS_NOT_SYMMETRIC = 4,
  THETA_STATUS_DIMENSION_MISMATCH = 5,
  THETA_STATUS_DERIV_ORDER_EXCEEDED = 6,
  THETA_STATUS_ELLIPSOID_TOO_LARGE = 7,
  THETA_STATUS_NO_CONVERGENCE = 8,
  THETA_STATUS_NUMERICAL = 9,
  THETA_STATUS_PANIC = 10,
} ThetaStatus;

// Opaque evaluation context for one Riemann matrix.
typedef struct ThetaContext ThetaContext;

// A complex number with the layout of C99 `double _Complex`.
typedef struct ThetaComplex {
  double re;
  double im;
} ThetaComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a context for the `g x g` matrix `tau_re + i tau_im`.
//
// # Safety
// `tau_re` and `tau_im` must point to `g * g` doubles; `out` must be writable.
// Free the result with [`theta_context_free`].
enum ThetaStatus theta_context_new(size_t g,
                                   const double *tau_re,
                                   const double *tau_im,
                                   double eps,
                                   uint32_t nderivs,
                                   bool siegel,
                                   struct ThetaContext **out);

// Releases a context. Null is ignored.
//
// # Safety
// `ctx` must come from [`theta_context_new`] and not have been freed.
void theta_context_free(struct ThetaContext *ctx);

// Genus of the context, or 0 for null.
//
// # Safety
// `ctx` must be null or a live context.
size_t theta_context_genus(const struct ThetaContext *ctx);

// Length of the shortest vector of the lattice `sqrt(pi) T Z^g`.
//
// # Safety
// `ctx` must be a live context and `out` writable.
enum ThetaStatus theta_context_rho(const struct ThetaContext *ctx, double *out);

// The matrix the context evaluates at (Siegel-reduced when enabled), and
// optionally the `2g x 2g` symplectic transform mapping the input to it.
//
// # Safety
// `re` and `im` must hold `g * g` doubles; `gamma` is null or holds `4 g * g` integers.
enum ThetaStatus theta_context_reduced_tau(const struct ThetaContext *ctx,
                                           double *re,
                                           double *im,
                                           int64_t *gamma);

// `D(k) theta[m](z, tau)`.
//
// `eps` and `delta` (each `g` bytes of 0/1) may both be null for the zero
// characteristic. `directions` holds `order` vectors of length `g`, one
// after another; it may be null when `order` is 0.
//
// # Safety
// Pointers must be valid for the lengths above; `out` must be writable.
enum ThetaStatus theta_eval(const struct ThetaContext *ctx,
                            const struct ThetaComplex *z,
                            const uint8_t *eps,
                            const uint8_t *delta,
                            const struct ThetaComplex *directions,
                            size_t order,
                            struct ThetaComplex *out);

// As [`theta_eval`], returning `value = mantissa * exp(exponent)` so that
// large `Im z` cannot overflow.
//
// # Safety
// As for [`theta_eval`]; `mantissa` and `exponent` must be writable.
enum ThetaStatus theta_eval_split(const struct ThetaContext *ctx,
                                  const struct ThetaComplex *z,
                                  const uint8_t *eps,
                                  const uint8_t *delta,
                                  const struct ThetaComplex *directions,
                                  size_t order,
                                  struct ThetaComplex *mantissa,
                                  double *exponent);

// Siegel-reduces `tau`. `gamma` may be null; otherwise it receives the
// `2g x 2g` transform. `stalled` may be null.
//
// # Safety
// Input arrays hold `g * g` doubles, as do `out_re` and `out_im`.
enum ThetaStatus theta_siegel_reduce(size_t g,
                                     const double *tau_re,
                                     const double *tau_im,
                                     double *out_re,
                                     double *out_im,
                                     int64_t *gamma,
                                     bool *stalled);

// A random Riemann matrix, deterministic in `seed`.
//
// # Safety
// `out_re` and `out_im` must hold `g * g` doubles.
enum ThetaStatus theta_random_siegel(size_t g, uint64_t seed, double *out_re, double *out_im);

// Scans the even theta constants for one below `tol` (a negative `tol`
// selects the default, `1e-6` times the largest constant). The smallest
// constant and its characteristic are written either way; `found` tells
// whether it is below the tolerance.
//
// # Safety
// `eps_out` and `delta_out` must hold `g` bytes; `value` and `found` must be writable.
enum ThetaStatus theta_find_null(const struct ThetaContext *ctx,
                                 double tol,
                                 uint8_t *eps_out,
                                 uint8_t *delta_out,
                                 struct ThetaComplex *value,
                                 bool *found);

// Symmetrised Hessian of `theta[m]` at `z = 0`, row-major into `g * g`
// complex entries. The context needs `nderivs >= 2` and `m` must be even.
//
// # Safety
// `eps`, `delta` hold `g` bytes; `out` holds `g * g` entries.
enum ThetaStatus theta_hessian(const struct ThetaContext *ctx,
                               const uint8_t *eps,
                               const uint8_t *delta,
                               struct ThetaComplex *out);

// Numerical rank of an `n x n` complex matrix: singular values above
// `rel_tol * sigma_max`. `singular_values` (n entries, descending) may be null.
//
// # Safety
// `m` holds `n * n` entries row-major; `rank` must be writable.
enum ThetaStatus theta_numerical_rank(size_t n,
                                      const struct ThetaComplex *m,
                                      double rel_tol,
                                      size_t *rank,
                                      double *singular_values);

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call into this library on the
// same thread.
const char *theta_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIEMANN_THETA_H */
