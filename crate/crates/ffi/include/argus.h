#ifndef ARGUS_H
#define ARGUS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define ARGUS_OK 0

#define ARGUS_ERR_NULL_POINTER -1

#define ARGUS_ERR_PANIC -2

#define ARGUS_ERR_UTF8 -3

#define ARGUS_ERR_BUFFER_TOO_SMALL -4

typedef enum ArgusCayleyDirection {
  // Upper half-plane to unit disc.
  ARGUS_CAYLEY_DIRECTION_TO_DISC = 0,
  // Unit disc to upper half-plane.
  ARGUS_CAYLEY_DIRECTION_TO_HALF_PLANE = 1,
} ArgusCayleyDirection;

typedef enum ArgusVanishingKind {
  ARGUS_VANISHING_KIND_ORDER = 0,
  ARGUS_VANISHING_KIND_INFINITE_ORDER_UP_TO = 1,
  ARGUS_VANISHING_KIND_NONVANISHING = 2,
} ArgusVanishingKind;

// Opaque holomorphic function handle.
typedef struct ArgusFunction ArgusFunction;

typedef struct ArgusComplex {
  double re;
  double im;
} ArgusComplex;

typedef struct ArgusJump {
  double radius;
  double left;
  double right;
  double jump;
  double expected;
  double residual;
} ArgusJump;

typedef struct ArgusCertificate {
  double partial_sum;
  double tail_bound;
  double total;
  uint64_t elements_checked;
  // 1 when the pointwise bound held at every window element.
  int32_t pointwise_bound_checked;
} ArgusCertificate;

typedef struct ArgusVanishing {
  enum ArgusVanishingKind kind;
  // The order for `Order`, the tested ceiling for `InfiniteOrderUpTo`, 0 otherwise.
  uint32_t order;
} ArgusVanishing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message on this thread into `buf` as a
// NUL-terminated string. Returns `ARGUS_ERR_BUFFER_TOO_SMALL` and writes
// nothing when `len` is smaller than the message plus terminator.
//
// # Safety
// `buf` must be valid for `len` bytes.
int32_t argus_last_error_message(char *buf, size_t len);

// Built-in function by name: `counterexample`, or `monomial:K` for `z^K`.
//
// # Safety
// `name` must be a NUL-terminated string and `out_fn` writable.
int32_t argus_function_builtin(const char *name, struct ArgusFunction **out_fn);

// Builds a function from a JSON factory spec.
//
// # Safety
// `json` must be a NUL-terminated string and `out_fn` writable.
int32_t argus_function_from_spec(const char *json, struct ArgusFunction **out_fn);

// Releases a handle. Null is ignored.
//
// # Safety
// `f` must come from this library and not be used afterwards.
void argus_function_free(struct ArgusFunction *f);

// # Safety
// `f` must be a live handle and `out_value` writable.
int32_t argus_function_eval(const struct ArgusFunction *f,
                            struct ArgusComplex z,
                            struct ArgusComplex *out_value);

// Index of the image of the upper semicircle of radius `r`.
//
// # Safety
// `f` must be a live handle and `out_index` writable.
int32_t argus_semicircle_index(const struct ArgusFunction *f,
                               double r,
                               double tol,
                               double *out_index);

// Zero count inside the circle `|z - center| = radius` by the argument principle.
//
// # Safety
// `f` must be a live handle and `out_count` writable.
int32_t argus_circle_zero_count(const struct ArgusFunction *f,
                                struct ArgusComplex center,
                                double radius,
                                double tol,
                                double *out_count);

// Semicircle index at each of `len` strictly decreasing radii.
//
// # Safety
// `radii` and `out_values` must each hold `len` doubles.
int32_t argus_index_profile(const struct ArgusFunction *f,
                            const double *radii,
                            size_t len,
                            double tol,
                            double delta,
                            double *out_values);

// Jump of the index across radius `r`, compared with the function's declared zeros.
//
// # Safety
// `f` must be a live handle and `out_jump` writable.
int32_t argus_jump(const struct ArgusFunction *f,
                   double r,
                   double delta,
                   double tol,
                   struct ArgusJump *out_jump);

// Normalized factor `(-ā/|a|)(z - a)/(1 - ā z)`, or `z` when `a = 0`.
//
// # Safety
// `out_value` must be writable.
int32_t argus_blaschke_factor(struct ArgusComplex a,
                              struct ArgusComplex z,
                              struct ArgusComplex *out_value);

// # Safety
// `out_value` must be writable.
int32_t argus_cayley(struct ArgusComplex z,
                     enum ArgusCayleyDirection direction,
                     struct ArgusComplex *out_value);

// Certificate for the cusp-example zero sequence on `|m| <= m_max`, `n <= n_max`.
//
// # Safety
// `out_cert` must be writable.
int32_t argus_blaschke_certificate(uint64_t m_max,
                                   uint64_t n_max,
                                   struct ArgusCertificate *out_cert);

// Riemann-map envelope at `t` for the cusp profile with Taylor
// coefficients `coefficients[0..len]` on `(0, endpoint]`.
//
// # Safety
// `coefficients` must hold `len` doubles and `out_value` be writable.
int32_t argus_cusp_envelope(const double *coefficients,
                            size_t len,
                            double endpoint,
                            double t,
                            double *out_value);

// Vanishing order at the origin along the segment from 1.
//
// # Safety
// `f` must be a live handle and `out_result` writable.
int32_t argus_vanishing_order(const struct ArgusFunction *f,
                              uint32_t n_max,
                              struct ArgusVanishing *out_result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARGUS_H */
