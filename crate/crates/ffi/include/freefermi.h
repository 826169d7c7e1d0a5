#ifndef FREEFERMI_H
#define FREEFERMI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes; the numeric values of `VALIDATION` and `NUMERICAL` match
// the command-line exit codes.
typedef enum FfStatus {
  FF_STATUS_OK = 0,
  FF_STATUS_NULL_POINTER = 1,
  FF_STATUS_VALIDATION = 2,
  FF_STATUS_NUMERICAL = 3,
  FF_STATUS_IO = 4,
  FF_STATUS_PANIC = 5,
} FfStatus;

// Occupation density (thermodynamic-limit state).
typedef struct FfDensity FfDensity;

// Ladder couplings together with their dispersion bands.
typedef struct FfLadder FfLadder;

// Finite set of occupied momentum modes.
typedef struct FfModeSet FfModeSet;

// `S ≈ a L + b log L + c` at Rényi order `alpha`.
typedef struct FfCoefficients {
  double alpha;
  double a;
  double b;
  double c;
} FfCoefficients;

// One coupling `J_{p,j} = re + i im`.
typedef struct FfCoupling {
  size_t p;
  size_t j;
  double re;
  double im;
} FfCoupling;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent failure on this thread, or NULL.
//
// The pointer stays valid until the next failing call on the same thread.
const char *ff_last_error(void);

// Density with plateau `values[r]` ending at angle `jumps[r]`; both arrays have length `r`.
//
// # Safety
// `jumps` and `values` must point to `r` readable doubles; `out` must be writable.
enum FfStatus ff_density_new(const double *jumps,
                             const double *values,
                             size_t r,
                             struct FfDensity **out);

// One of the three reference states (`index` 1, 2 or 3).
//
// # Safety
// `out` must be writable.
enum FfStatus ff_density_named(uint32_t index, struct FfDensity **out);

// # Safety
// `g` must be NULL or a handle from this library that has not been freed.
void ff_density_free(struct FfDensity *g);

// Mode set on a chain of even length `n`, modes in `1 - n/2 ..= n/2`.
//
// # Safety
// `modes` must point to `count` readable integers; `out` must be writable.
enum FfStatus ff_modeset_new(size_t n, const int64_t *modes, size_t count, struct FfModeSet **out);

// # Safety
// `ms` must be NULL or a handle from this library that has not been freed.
void ff_modeset_free(struct FfModeSet *ms);

// Coarse-grained density of a mode set (`+1` on occupied runs, `-1` elsewhere).
//
// # Safety
// `ms` must be a live handle; `out` must be writable.
enum FfStatus ff_modeset_density(const struct FfModeSet *ms, struct FfDensity **out);

// Large-`L` expansion coefficients of a density.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum FfStatus ff_expansion(const struct FfDensity *g, double alpha, struct FfCoefficients *out);

// Exact entropies of a density for `count` interval lengths.
//
// # Safety
// `lengths` must hold `count` readable values and `out` room for `count` doubles.
enum FfStatus ff_density_entropies(const struct FfDensity *g,
                                   const size_t *lengths,
                                   size_t count,
                                   double alpha,
                                   double *out);

// Exact entropies of a finite mode set for `count` interval lengths.
//
// # Safety
// `lengths` must hold `count` readable values and `out` room for `count` doubles.
enum FfStatus ff_modeset_entropies(const struct FfModeSet *ms,
                                   const size_t *lengths,
                                   size_t count,
                                   double alpha,
                                   double *out);

// Ladder with `q` rails from `count` couplings (duplicates are summed).
//
// # Safety
// `couplings` must point to `count` readable entries; `out` must be writable.
enum FfStatus ff_ladder_new(size_t q,
                            const struct FfCoupling *couplings,
                            size_t count,
                            struct FfLadder **out);

// # Safety
// `ladder` must be NULL or a handle from this library that has not been freed.
void ff_ladder_free(struct FfLadder *ladder);

// Number of rails.
//
// # Safety
// `ladder` must be a live handle; `out` must be writable.
enum FfStatus ff_ladder_rails(const struct FfLadder *ladder, size_t *out);

// Sign changes of band `s` over the Brillouin zone.
//
// # Safety
// `ladder` must be a live handle; `out` must be writable.
enum FfStatus ff_ladder_band_zeros(const struct FfLadder *ladder, size_t s, size_t *out);

// Entropy of the ladder fragment of length `l` per rail; `asymptotic` selects
// the large-`L` formula instead of exact spectra.
//
// # Safety
// `ladder` must be a live handle; `out` must be writable.
enum FfStatus ff_ladder_fragment_entropy(const struct FfLadder *ladder,
                                         size_t l,
                                         double alpha,
                                         bool asymptotic,
                                         double *out);

// Total occupation density of the ladder ground state.
//
// # Safety
// `ladder` must be a live handle; `out` must be writable.
enum FfStatus ff_ladder_density(const struct FfLadder *ladder, struct FfDensity **out);

// Number of plateaus of a density.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum FfStatus ff_density_plateaus(const struct FfDensity *g, size_t *out);

// Copies up to `cap` jump angles and plateau values; `written` receives the
// plateau count, which may exceed `cap`.
//
// # Safety
// `jumps` and `values` must have room for `cap` doubles; `written` must be writable.
enum FfStatus ff_density_plateau_data(const struct FfDensity *g,
                                      double *jumps,
                                      double *values,
                                      size_t cap,
                                      size_t *written);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FREEFERMI_H */
