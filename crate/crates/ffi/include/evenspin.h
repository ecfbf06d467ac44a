#ifndef EVENSPIN_H
#define EVENSPIN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  ES_STATUS_OK = 0,
  ES_STATUS_NULL_POINTER = 1,
  ES_STATUS_DOMAIN = 2,
  ES_STATUS_SHAPE = 3,
  ES_STATUS_CONTRACT = 4,
  ES_STATUS_CHECK_FAILED = 5,
  ES_STATUS_TRANSCRIPTION_SUSPECT = 6,
  ES_STATUS_PANIC = 7,
} EsStatus;

/**
 * Opaque one- and two-particle state for a fixed four-momentum.
 */
typedef struct EsSystem EsSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a system for mass `m` and momentum `(px, py, pz)`.
 *
 * # Safety
 * `out_sys` must be valid for writing one pointer.
 */
EsStatus es_system_new(double m, double px, double py, double pz, EsSystem **out_sys);

/**
 * Releases a system. Null is a no-op.
 *
 * # Safety
 * `sys` must be null or come from [`es_system_new`] and not be freed twice.
 */
void es_system_free(EsSystem *sys);

/**
 * Energy `p0 = sqrt(m^2 + |p|^2)`.
 *
 * # Safety
 * Pointers must be null or valid.
 */
EsStatus es_energy(const EsSystem *sys, double *out_energy);

/**
 * Ascending eigenvalues of the even spin projected on unit vector `(ax, ay, az)`.
 *
 * # Safety
 * `out_values` must be valid for writing four doubles.
 */
EsStatus es_even_spin_eigenvalues(const EsSystem *sys,
                                  double ax,
                                  double ay,
                                  double az,
                                  double *out_values);

/**
 * Singlet correlation for unit detector directions `a` and `b`, from the
 * closed form and from direct contraction.
 *
 * # Safety
 * `a` and `b` must point to three doubles; outputs must be writable.
 */
EsStatus es_bell_correlation(const EsSystem *sys,
                             const double *a,
                             const double *b,
                             double *out_formula,
                             double *out_numeric);

/**
 * Ascending eigenvalues of the squared total even spin on the 16-dimensional pair space.
 *
 * # Safety
 * `out_values` must be valid for writing sixteen doubles.
 */
EsStatus es_two_particle_eigenvalues(const EsSystem *sys, double *out_values);

/**
 * Runs every identity check at this momentum with a uniform tolerance.
 * `out_passed` receives 1 if all hold, else 0; `out_count` the number of checks.
 *
 * # Safety
 * Pointers must be null or valid.
 */
EsStatus es_verify(const EsSystem *sys, double tol, int32_t *out_passed, uintptr_t *out_count);

/**
 * Signed ring radius `s / |p|` of a massless particle of helicity `s`.
 *
 * # Safety
 * `out_radius` must be valid for writing.
 */
EsStatus es_robinson_radius(double s, double p_mag, double *out_radius);

/**
 * Copies the calling thread's last error message, NUL-terminated and
 * truncated to `len`. Returns the full message length excluding the NUL,
 * or 0 when there is no error.
 *
 * # Safety
 * `buf` must be null or valid for writing `len` bytes.
 */
uintptr_t es_last_error_message(char *buf, uintptr_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EVENSPIN_H */
