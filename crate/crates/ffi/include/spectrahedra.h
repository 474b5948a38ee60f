/* C interface for the spectrahedra toolkit. */

#ifndef SPECTRAHEDRA_H
#define SPECTRAHEDRA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every API call.
typedef enum SpectraStatus {
  SPECTRA_STATUS_OK = 0,
  SPECTRA_STATUS_NULL_ARGUMENT = 1,
  SPECTRA_STATUS_INVALID_ARGUMENT = 2,
  SPECTRA_STATUS_PARSE_ERROR = 3,
  // The requested verification ran but did not verify.
  SPECTRA_STATUS_UNVERIFIED = 4,
  // A proved statement failed numerically; indicates a solver bug.
  SPECTRA_STATUS_INTERNAL_ERROR = 5,
} SpectraStatus;

// Opaque pencil handle.
typedef struct SpectraPencil SpectraPencil;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message for this thread; valid until the next failing call.
const char *spectra_last_error(void);

// Parse a pencil from a JSON string. Hermitian pencils are doubled to real
// symmetric form.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum SpectraStatus spectra_pencil_from_json(const char *json, struct SpectraPencil **out);

// Parse a pencil from a JSON file on disk.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum SpectraStatus spectra_pencil_load(const char *path, struct SpectraPencil **out);

// Release a pencil handle. Passing NULL is a no-op.
//
// # Safety
// `p` must be a pointer previously returned by a constructor, not yet freed.
void spectra_pencil_free(struct SpectraPencil *p);

// Matrix size `m` and ambient dimension `k` of the pencil.
//
// # Safety
// All pointers must be valid.
enum SpectraStatus spectra_pencil_dims(const struct SpectraPencil *p,
                                       uintptr_t *m_out,
                                       uintptr_t *k_out);

// Classify a point: `class_out` receives 1 (interior), 0 (boundary) or
// -1 (outside); `min_eig_out` the smallest eigenvalue of `Q(z)`.
//
// # Safety
// `z` must point to `len` doubles; out-pointers must be valid.
enum SpectraStatus spectra_membership(const struct SpectraPencil *p,
                                      const double *z,
                                      uintptr_t len,
                                      double tol_abs,
                                      int32_t *class_out,
                                      double *min_eig_out);

// Kernel dimension of `Q(z)` at a boundary point.
//
// # Safety
// `z` must point to `len` doubles; `dim_out` must be valid.
enum SpectraStatus spectra_kernel_dimension(const struct SpectraPencil *p,
                                            const double *z,
                                            uintptr_t len,
                                            double tol_abs,
                                            uintptr_t *dim_out);

// Extreme-point test at a point of `K` (interior points report false).
//
// # Safety
// `z` must point to `len` doubles; `out` must be valid.
enum SpectraStatus spectra_is_extreme(const struct SpectraPencil *p,
                                      const double *z,
                                      uintptr_t len,
                                      double tol_abs,
                                      int32_t *out);

// Build and verify a separation certificate from the extreme point `x`
// against the target `y`, audit it, and return the full JSON report.
// Returns `Unverified` when the pipeline runs but fails a check.
//
// # Safety
// `x` and `y` must each point to `len` doubles; `json_out` must be valid.
enum SpectraStatus spectra_certify_json(const struct SpectraPencil *p,
                                        const double *x,
                                        const double *y,
                                        uintptr_t len,
                                        double epsilon,
                                        uintptr_t grid,
                                        uintptr_t samples,
                                        uint64_t seed,
                                        double tol_abs,
                                        char **json_out);

// Release a string returned by this library. Passing NULL is a no-op.
//
// # Safety
// `s` must be a pointer previously returned through a `json_out`
// parameter, not yet freed.
void spectra_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECTRAHEDRA_H */
