#ifndef EISREG_H
#define EISREG_H

/* Generated by cbindgen from the eisreg-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes of every C-ABI call.
 */
typedef enum EisregStatus {
  EisregStatus_Ok = 0,
  /**
   * A pole, divergence or accuracy failure in the mathematics.
   */
  EisregStatus_Numerical = 1,
  /**
   * Malformed input (null pointer, bad name, non-unimodular matrix, ...).
   */
  EisregStatus_InvalidInput = 2,
  /**
   * An internal panic was caught at the boundary.
   */
  EisregStatus_Internal = 3,
} EisregStatus;

/**
 * Variant selector for the Eisenstein evaluator.
 */
typedef enum EisregVariant {
  EisregVariant_Plain = 0,
  EisregVariant_Star = 1,
  EisregVariant_Regularized = 2,
} EisregVariant;

/**
 * Opaque regularized-integral engine.
 */
typedef struct EisregEngine EisregEngine;

/**
 * Opaque Eisenstein-series evaluator (a frozen spectral parameter,
 * derivative order and variant).
 */
typedef struct EisregEvaluator EisregEvaluator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *eisreg_last_error(void);

/**
 * Riemann zeta at re + im*i.
 *
 * # Safety
 * `out_re` and `out_im` must point to writable doubles.
 */
enum EisregStatus eisreg_zeta(double re, double im, double *out_re, double *out_im);

/**
 * Complex Gamma function.
 *
 * # Safety
 * `out_re` and `out_im` must point to writable doubles.
 */
enum EisregStatus eisreg_gamma(double re, double im, double *out_re, double *out_im);

/**
 * Completed zeta pi^(-s/2) Gamma(s/2) zeta(s).
 *
 * # Safety
 * `out_re` and `out_im` must point to writable doubles.
 */
enum EisregStatus eisreg_lambda_complete(double re, double im, double *out_re, double *out_im);

/**
 * Modified Bessel function K_nu(y) for y > 0 (underflows to 0 silently).
 *
 * # Safety
 * `out_re` and `out_im` must point to writable doubles.
 */
enum EisregStatus eisreg_bessel_k(double nu_re,
                                  double nu_im,
                                  double y,
                                  double *out_re,
                                  double *out_im);

/**
 * Volume of the quotient (pi/3 over the rationals).
 *
 * # Safety
 * `out` must point to a writable double.
 */
enum EisregStatus eisreg_volume(double *out);

/**
 * Residue at 0 of Lambda(-2s)/Lambda(2+2s) (3/pi over the rationals).
 *
 * # Safety
 * `out` must point to a writable double.
 */
enum EisregStatus eisreg_lambda_residue(double *out);

/**
 * Create an evaluator; returns null on failure (see `eisreg_last_error`).
 */
struct EisregEvaluator *eisreg_evaluator_new(double s_re,
                                             double s_im,
                                             uintptr_t deriv,
                                             enum EisregVariant variant);

/**
 * Evaluate at x + iy (y > 0; the point is reduced internally).
 *
 * # Safety
 * `handle` must come from `eisreg_evaluator_new` and not have been freed;
 * `out_re`, `out_im` must point to writable doubles.
 */
enum EisregStatus eisreg_evaluator_eval(const struct EisregEvaluator *handle,
                                        double x,
                                        double y,
                                        double *out_re,
                                        double *out_im);

/**
 * Release an evaluator.
 *
 * # Safety
 * `handle` must come from `eisreg_evaluator_new` and not be used afterwards.
 */
void eisreg_evaluator_free(struct EisregEvaluator *handle);

/**
 * Create an engine with the default quadrature; null on failure.
 */
struct EisregEngine *eisreg_engine_new(void);

/**
 * Regularized integral of a named built-in test function
 * ("one", "eisprod", "cusp", "ereg", "eprime2"). Outputs the principal and
 * degenerate parts and their sum, as re/im pairs.
 *
 * # Safety
 * `handle` must come from `eisreg_engine_new`; `phi_name` must be a valid
 * NUL-terminated string; the six output pointers must be writable doubles.
 */
enum EisregStatus eisreg_engine_reg_integral(const struct EisregEngine *handle,
                                             const char *phi_name,
                                             double *out_principal_re,
                                             double *out_principal_im,
                                             double *out_degenerate_re,
                                             double *out_degenerate_im,
                                             double *out_value_re,
                                             double *out_value_im);

/**
 * Release an engine.
 *
 * # Safety
 * `handle` must come from `eisreg_engine_new` and not be used afterwards.
 */
void eisreg_engine_free(struct EisregEngine *handle);

/**
 * Unipotent normal form of an r x r unimodular matrix against the level-N
 * congruence subgroup. `entries` is row-major with r*r values; the two
 * output buffers receive the lower and upper unipotent factors (entries fit
 * in [-N/2, N/2]). `lower_flavor` selects the mirror subgroup, which swaps
 * the factor order to upper-then-lower.
 *
 * # Safety
 * `entries`, `out_n_minus`, `out_n_plus` must point to r*r readable resp.
 * writable 64-bit integers.
 */
enum EisregStatus eisreg_coset_normal_form(uintptr_t r,
                                           uint64_t n,
                                           const int64_t *entries,
                                           bool lower_flavor,
                                           int64_t *out_n_minus,
                                           int64_t *out_n_plus);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EISREG_H */
