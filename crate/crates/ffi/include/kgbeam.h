/* kgbeam C API — generated by cbindgen, do not edit. */

#ifndef KGBEAM_H
#define KGBEAM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point.
typedef enum KgbStatus {
  KgbStatus_Ok = 0,
  KgbStatus_NullArgument = 1,
  KgbStatus_InvalidParameter = 2,
  KgbStatus_Utf8 = 3,
  KgbStatus_EvalFailed = 4,
} KgbStatus;

// Opaque beam-field handle.
typedef struct KgbField KgbField;

// Field descriptor consumed by `kgb_field_create`. Only the members the
// chosen family uses are read; the rest are ignored. See `kgb_field_create`
// for the family ids and their parameters.
typedef struct KgbBeamDesc {
  // Radial index (lg).
  int32_t n;
  // Angular order (lg, bessel, bg; may be negative for bessel).
  int32_t l;
  // Hermite index in x (hg).
  int32_t mx;
  // Hermite index in y (hg).
  int32_t ny;
  // Derivative order (exp).
  int32_t k;
  // Longitudinal wavenumber (g_exp, exp).
  double q;
  // Transverse momentum (g_b, bessel).
  double p_perp;
  // Longitudinal momentum (g_b, bessel).
  double p_z;
  // Displacement parameter (g_bg, bg).
  double b;
  // Kernel angle parameter (g_b, g_bg).
  double varphi;
  // Energy parameter E.
  double energy;
  // Mass m.
  double mass;
  // Waist w0.
  double waist;
} KgbBeamDesc;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// A descriptor filled with the library defaults (E = 2, m = 1, w0 = 1, …).
struct KgbBeamDesc kgb_beam_desc_default(void);

// Create a field handle. `family` is one of: `g_lg`, `lg`, `g_hg`, `hg`,
// `g_exp`, `exp`, `g_md`, `g_b`, `bessel`, `g_bg`, `bg`.
//
// # Safety
// `family` must be a valid NUL-terminated string; `desc` and `out` must be
// valid pointers. On success `*out` owns the handle until `kgb_field_free`.
enum KgbStatus kgb_field_create(const char *family,
                                const struct KgbBeamDesc *desc,
                                struct KgbField **out);

// Evaluate the field at one spacetime point.
//
// # Safety
// `field`, `out_re`, `out_im` must be valid pointers.
enum KgbStatus kgb_field_eval(const struct KgbField *field,
                              double t,
                              double x,
                              double y,
                              double z,
                              double *out_re,
                              double *out_im);

// Evaluate the field at `count` points given as interleaved `(t, x, y, z)`
// quadruples; writes interleaved `(re, im)` pairs.
//
// # Safety
// `points` must hold `4·count` doubles and `out` must have room for
// `2·count` doubles.
enum KgbStatus kgb_field_eval_many(const struct KgbField *field,
                                   const double *points,
                                   size_t count,
                                   double *out);

// Relative wave-operator residual of the field at one point, using a
// central finite-difference stencil of the given even order (2, 4, 6, 8)
// and step.
//
// # Safety
// `field` and `out_relative` must be valid pointers.
enum KgbStatus kgb_field_kg_residual(const struct KgbField *field,
                                     double t,
                                     double x,
                                     double y,
                                     double z,
                                     uint32_t fd_order,
                                     double fd_step,
                                     double *out_relative);

// Release a field handle. Passing NULL is a no-op.
//
// # Safety
// `field` must be a pointer previously returned by `kgb_field_create` and
// not yet freed.
void kgb_field_free(struct KgbField *field);

// Library version as a static NUL-terminated string.
const char *kgb_version(void);

// Human-readable description of a status code (static string).
const char *kgb_status_message(enum KgbStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KGBEAM_H */
