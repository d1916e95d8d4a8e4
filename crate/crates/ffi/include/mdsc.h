#ifndef MDSC_H
#define MDSC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Targeted objects.
 */
typedef enum MdscObjectKind {
  MdscObjectKind_Cycle4 = 0,
  MdscObjectKind_Cycle6 = 1,
  MdscObjectKind_Cycle8 = 2,
  MdscObjectKind_Cfg66 = 3,
  MdscObjectKind_Cfg68 = 4,
  MdscObjectKind_Cfg88 = 5,
} MdscObjectKind;

/**
 * Status codes returned by every fallible call.
 */
typedef enum MdscStatus {
  MdscStatus_Ok = 0,
  MdscStatus_NullPointer = 1,
  MdscStatus_InvalidArgument = 2,
  MdscStatus_Dimension = 3,
  MdscStatus_OutOfRange = 4,
  MdscStatus_Unsupported = 5,
  MdscStatus_TooLarge = 6,
  MdscStatus_NonFinite = 7,
  MdscStatus_Parse = 8,
  MdscStatus_Io = 9,
  MdscStatus_BufferTooSmall = 10,
  MdscStatus_Panic = 11,
} MdscStatus;

/**
 * Grade objectives.
 */
typedef enum MdscTarget {
  MdscTarget_Cycle6 = 0,
  MdscTarget_Cycle8 = 1,
  MdscTarget_Concat = 2,
} MdscTarget;

/**
 * A code: parameters with partition, lifting and relocation matrices.
 */
typedef struct MdscCode MdscCode;

/**
 * Result of one distributor run.
 */
typedef struct MdscGrade MdscGrade;

/**
 * A sparse binary parity-check matrix.
 */
typedef struct MdscMatrix MdscMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *mdsc_version(void);

/**
 * Message of the last failed call on this thread. `needed` receives the
 * size including the NUL; pass a null `buf` with `cap` 0 to query it.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes or be null.
 */
enum MdscStatus mdsc_last_error(char *buf, size_t cap, size_t *needed);

/**
 * Loads a published code by name (`md1`, `md2`, `md6`, `md7`).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `code` must be writable.
 */
enum MdscStatus mdsc_code_catalog(const char *name, struct MdscCode **code);

/**
 * Builds a code from row-major `gamma × kappa` matrices. A null `relocation`
 * means no relocation.
 *
 * # Safety
 * Non-null matrix pointers must reference `gamma * kappa` values; `code`
 * must be writable.
 */
enum MdscStatus mdsc_code_new(size_t gamma,
                              size_t kappa,
                              size_t z,
                              size_t coupling,
                              size_t m,
                              size_t aux,
                              const uint32_t *partition,
                              const uint32_t *lifting,
                              const uint32_t *relocation,
                              struct MdscCode **code);

/**
 * Releases a code; null is ignored.
 *
 * # Safety
 * `code` must come from this library and not be used afterwards.
 */
void mdsc_code_free(struct MdscCode *code);

/**
 * Writes `(γ, κ, z, L, m, M)` into `params[0..6]`.
 *
 * # Safety
 * `params` must reference six writable values.
 */
enum MdscStatus mdsc_code_params(const struct MdscCode *code, size_t *params);

/**
 * Exact count of one object kind in the MD-SC graph, or in the underlying
 * SC graph when `sc` is nonzero.
 *
 * # Safety
 * `code` must be a live handle; `count` must be writable.
 */
enum MdscStatus mdsc_count(const struct MdscCode *code,
                           enum MdscObjectKind object,
                           bool sc,
                           uint64_t *count);

/**
 * Runs the distributor with row targets `pstar[0..len]` and density cap `tmax`.
 *
 * # Safety
 * `pstar` must reference `len` values; `grade` must be writable.
 */
enum MdscStatus mdsc_grade_run(const struct MdscCode *code,
                               enum MdscTarget target,
                               const double *pstar,
                               size_t len,
                               double tmax,
                               struct MdscGrade **grade);

/**
 * Copies the row-major distribution into `p[0..cap]`; `rows` and `cols`
 * receive its shape.
 *
 * # Safety
 * `p` must reference `cap` writable values; `rows` and `cols` must be writable.
 */
enum MdscStatus mdsc_grade_distribution(const struct MdscGrade *grade,
                                        double *p,
                                        size_t cap,
                                        size_t *rows,
                                        size_t *cols);

/**
 * Final objective, iteration count and relocation density of a run.
 *
 * # Safety
 * Output pointers must be writable or null.
 */
enum MdscStatus mdsc_grade_summary(const struct MdscGrade *grade,
                                   double *objective,
                                   size_t *iterations,
                                   double *density);

/**
 * # Safety
 * `grade` must come from this library and not be used afterwards.
 */
void mdsc_grade_free(struct MdscGrade *grade);

/**
 * Forecast of the cycle-`len` count (6 or 8) from `n` expected candidates.
 *
 * # Safety
 * `bounds` must reference three writable values: estimate, lower, upper.
 */
enum MdscStatus mdsc_forecast(const struct MdscCode *code, double n, uint32_t len, double *bounds);

/**
 * Parity-check matrix of the MD-SC code.
 *
 * # Safety
 * `code` must be a live handle; `matrix` must be writable.
 */
enum MdscStatus mdsc_matrix_build(const struct MdscCode *code, struct MdscMatrix **matrix);

/**
 * Rows, columns and number of ones.
 *
 * # Safety
 * Output pointers must be writable or null.
 */
enum MdscStatus mdsc_matrix_shape(const struct MdscMatrix *matrix,
                                  size_t *rows,
                                  size_t *cols,
                                  size_t *nnz);

/**
 * Alist text of the matrix; see `mdsc_last_error` for the buffer protocol.
 *
 * # Safety
 * `buf` must reference `cap` writable bytes or be null with `cap` 0.
 */
enum MdscStatus mdsc_matrix_alist(const struct MdscMatrix *matrix,
                                  char *buf,
                                  size_t cap,
                                  size_t *needed);

/**
 * # Safety
 * `matrix` must come from this library and not be used afterwards.
 */
void mdsc_matrix_free(struct MdscMatrix *matrix);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MDSC_H */
