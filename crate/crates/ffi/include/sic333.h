#ifndef SIC333_H
#define SIC333_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum Sic333Status {
  SIC333_STATUS_OK = 0,
  SIC333_STATUS_NULL_POINTER = 1,
  SIC333_STATUS_INVALID_ARGUMENT = 2,
  SIC333_STATUS_NOT_CANONICAL = 3,
  SIC333_STATUS_VERIFICATION_FAILED = 4,
  SIC333_STATUS_LIMIT_EXCEEDED = 5,
  SIC333_STATUS_BUFFER_TOO_SMALL = 6,
  SIC333_STATUS_PANIC = 7,
} Sic333Status;

/**
 * Dense complex square matrix.
 */
typedef struct Sic333Matrix Sic333Matrix;

/**
 * JSON report plus its pass flag and, for searches, the fiducial vector.
 */
typedef struct Sic333Report Sic333Report;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *sic333_last_error(void);

/**
 * `D_{(a1, a2)}` for the integer pair; for even `d` the phase depends on
 * the lift.
 */
enum Sic333Status sic333_displacement(uint64_t d,
                                      int64_t a1,
                                      int64_t a2,
                                      struct Sic333Matrix **out);

/**
 * Zauner's unitary with `𝔷³ = I`.
 */
enum Sic333Status sic333_zauner(uint64_t d, struct Sic333Matrix **out);

/**
 * `A_M` for the row-major entries `m[0..4]`, reduced modulo d̄.
 */
enum Sic333Status sic333_symplectic_unitary(uint64_t d,
                                            const int64_t *m,
                                            struct Sic333Matrix **out);

/**
 * Dimension of the matrix, 0 for a null handle.
 */
size_t sic333_matrix_dim(const struct Sic333Matrix *m);

enum Sic333Status sic333_matrix_get(const struct Sic333Matrix *m,
                                    size_t row,
                                    size_t col,
                                    double *re,
                                    double *im);

/**
 * Copies the matrix row-major as interleaved `(re, im)` into `buf`, which
 * must hold `2·n²` doubles.
 */
enum Sic333Status sic333_matrix_copy(const struct Sic333Matrix *m, double *buf, size_t len);

void sic333_matrix_free(struct Sic333Matrix *m);

/**
 * Trace of `M` modulo `d`.
 */
enum Sic333Status sic333_clifford_trace(uint64_t d, const int64_t *m, uint64_t *out);

/**
 * Conjugacy class of a canonical order-three matrix as a JSON report
 * `{"class", "representative", "lift", "certificate"}`.
 */
enum Sic333Status sic333_classify(uint64_t d, const int64_t *m, struct Sic333Report **out);

/**
 * `S` with `S·M·S⁻¹ = M_𝔷` for prime `d > 3`, written row-major to `out[0..4]`.
 */
enum Sic333Status sic333_prime_conjugator(uint64_t d, const int64_t *m, int64_t *out);

/**
 * SIC check of the vector given as `d` interleaved `(re, im)` pairs.
 * A non-SIC input is not an error: the report's pass flag is false.
 */
enum Sic333Status sic333_verify_fiducial(uint64_t d,
                                         const double *re_im,
                                         double tol,
                                         struct Sic333Report **out);

/**
 * Fiducial search, in the Zauner eigenspace when `use_zauner` is true and
 * over the whole sphere otherwise. `budget` and `restarts` of 0 keep the
 * defaults.
 */
enum Sic333Status sic333_search_fiducial(uint64_t d,
                                         bool use_zauner,
                                         uint64_t seed,
                                         size_t budget,
                                         size_t restarts,
                                         struct Sic333Report **out);

/**
 * Reconstructs `ρ` from `d²` probabilities ordered `a = (a1, a2)` with
 * `a2` fastest. `condition` may be null.
 */
enum Sic333Status sic333_reconstruct(uint64_t d,
                                     const double *fiducial_re_im,
                                     const double *probabilities,
                                     size_t n_probabilities,
                                     struct Sic333Matrix **out,
                                     double *condition);

/**
 * NUL-terminated JSON owned by the report.
 */
const char *sic333_report_json(const struct Sic333Report *r);

bool sic333_report_passed(const struct Sic333Report *r);

/**
 * Copies the report's vector as interleaved `(re, im)`; `len` counts doubles.
 */
enum Sic333Status sic333_report_vector(const struct Sic333Report *r, double *buf, size_t len);

void sic333_report_free(struct Sic333Report *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIC333_H */
