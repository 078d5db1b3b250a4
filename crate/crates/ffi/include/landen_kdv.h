#ifndef LANDEN_KDV_H
#define LANDEN_KDV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LkScaling {
  /**
   * Time enters as `q1·α²·t`.
   */
  LK_SCALING_STANDARD = 0,
  /**
   * Time enters as `q1·α·t`.
   */
  LK_SCALING_AS_WRITTEN = 1,
} LkScaling;

typedef enum LkSign {
  LK_SIGN_PLUS = 0,
  LK_SIGN_MINUS = 1,
} LkSign;

typedef enum LkStatus {
  LK_STATUS_OK = 0,
  LK_STATUS_NULL_POINTER = 1,
  LK_STATUS_DOMAIN = 2,
  LK_STATUS_CONSISTENCY = 3,
  LK_STATUS_PERIOD_MISMATCH = 4,
  LK_STATUS_GRID = 5,
  LK_STATUS_CONFIG = 6,
  LK_STATUS_INSTABILITY = 7,
  LK_STATUS_BUFFER_TOO_SMALL = 8,
  LK_STATUS_PANIC = 9,
} LkStatus;

/**
 * Opaque Landen map for a fixed `(p, m)`.
 */
typedef struct LkLandenMap LkLandenMap;

/**
 * Opaque exact wave (`u1`, `u_p` or `u±`).
 */
typedef struct LkWave LkWave;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` as a NUL-terminated string,
 * truncating if needed. Returns the full message length in bytes, excluding the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t lk_last_error(char *buf, size_t len);

/**
 * Static, NUL-terminated name of a status code.
 */
const char *lk_status_name(enum LkStatus status);

/**
 * Complete elliptic integral `K(m)` for `0 ≤ m < 1`.
 *
 * # Safety
 * `k` must be null or valid for writes.
 */
enum LkStatus lk_complete_k(double m, double *k);

/**
 * `sn`, `cn`, `dn` of `(x | m)` for `0 ≤ m ≤ 1`.
 *
 * # Safety
 * Each output pointer must be null or valid for writes.
 */
enum LkStatus lk_jacobi(double x, double m, double *sn, double *cn, double *dn);

/**
 * Builds the order-`p` Landen map for `0 < m < 1`.
 *
 * # Safety
 * `map` must be null or valid for writes. The handle is freed with [`lk_landen_map_free`].
 */
enum LkStatus lk_landen_map_new(size_t p, double m, struct LkLandenMap **map);

/**
 * # Safety
 * `map` must be null or a handle from [`lk_landen_map_new`] not yet freed.
 */
void lk_landen_map_free(struct LkLandenMap *map);

/**
 * # Safety
 * `map` must be a live handle; `gamma` null or valid for writes.
 */
enum LkStatus lk_landen_map_gamma(const struct LkLandenMap *map, double *gamma);

/**
 * # Safety
 * `map` must be a live handle; `m_tilde` null or valid for writes.
 */
enum LkStatus lk_landen_map_m_tilde(const struct LkLandenMap *map, double *m_tilde);

/**
 * Velocity constant `A(p, m)` from the closed-form relation.
 *
 * # Safety
 * `map` must be a live handle; `a` null or valid for writes.
 */
enum LkStatus lk_landen_map_velocity_constant(const struct LkLandenMap *map, double *a);

/**
 * Number of cyclic constants, `p − 1`.
 *
 * # Safety
 * `map` must be a live handle; `count` null or valid for writes.
 */
enum LkStatus lk_landen_map_cyclic_count(const struct LkLandenMap *map, size_t *count);

/**
 * Copies `a_p(1), …, a_p(p − 1)` into `values`.
 *
 * # Safety
 * `map` must be a live handle; `values` null or valid for `len` writes.
 */
enum LkStatus lk_landen_map_cyclic_constants(const struct LkLandenMap *map,
                                             double *values,
                                             size_t len);

/**
 * `A(p, m)` after the closed form and the residual fit agree.
 *
 * # Safety
 * `a` must be null or valid for writes.
 */
enum LkStatus lk_a_constant(size_t p, double m, double *a);

/**
 * Superposed wave `u_p`; `p = 1` gives the cnoidal wave `u1`.
 *
 * # Safety
 * `wave` must be null or valid for writes. Free the handle with [`lk_wave_free`].
 */
enum LkStatus lk_wave_up(double alpha, double beta, double m, size_t p, struct LkWave **wave);

/**
 * The `u±` wave.
 *
 * # Safety
 * `wave` must be null or valid for writes. Free the handle with [`lk_wave_free`].
 */
enum LkStatus lk_wave_upm(double alpha,
                          double m,
                          enum LkSign sign,
                          enum LkScaling scaling,
                          struct LkWave **wave);

/**
 * # Safety
 * `wave` must be null or a handle not yet freed.
 */
void lk_wave_free(struct LkWave *wave);

/**
 * # Safety
 * `wave` must be a live handle; `value` null or valid for writes.
 */
enum LkStatus lk_wave_value(const struct LkWave *wave, double x, double t, double *value);

/**
 * # Safety
 * `wave` must be a live handle; `velocity` null or valid for writes.
 */
enum LkStatus lk_wave_velocity(const struct LkWave *wave, double *velocity);

/**
 * Spatial period; `LK_STATUS_DOMAIN` when the wave is aperiodic (`m = 1`).
 *
 * # Safety
 * `wave` must be a live handle; `period` null or valid for writes.
 */
enum LkStatus lk_wave_period(const struct LkWave *wave, double *period);

/**
 * Normalized KdV residual of the wave on `n` points over one period at time `t`.
 * `aliasing` (optional) receives 1 when the top third of the spectrum holds too much energy.
 *
 * # Safety
 * `wave` must be a live handle; `normalized` null or valid for writes; `aliasing` null or valid.
 */
enum LkStatus lk_wave_residual(const struct LkWave *wave,
                               size_t n,
                               double t,
                               double *normalized,
                               int *aliasing);

/**
 * Max deviation between `u_p` and its single-`dn²` Landen form over `n` points of one
 * `dn` period `2K/α`, at each of the `count` times.
 *
 * # Safety
 * `times` must point to `count` readable values; `deviation` null or valid for writes.
 */
enum LkStatus lk_equivalence_check(double alpha,
                                   double beta,
                                   double m,
                                   size_t p,
                                   size_t n,
                                   const double *times,
                                   size_t count,
                                   double *deviation);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LANDEN_KDV_H */
