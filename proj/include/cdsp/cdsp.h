#ifndef CDSP_CDSP_H
#define CDSP_CDSP_H

/* C interface to the cdsp library: measure -> symbol pipeline, subnormality
 * certificates and the JSON report runner. Handles are opaque and owned by
 * the caller; every *_create has a matching *_destroy. Functions returning
 * cdsp_status leave a thread-local message readable with cdsp_last_error(). */

#include <stddef.h>

#if defined(_WIN32)
#if defined(CDSP_BUILDING_LIBRARY)
#define CDSP_API __declspec(dllexport)
#else
#define CDSP_API __declspec(dllimport)
#endif
#else
#define CDSP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cdsp_status {
  CDSP_OK = 0,
  CDSP_INVALID_ARGUMENT = 1,
  CDSP_DEGREE_ZERO = 2,
  CDSP_POLES_NOT_DISTINCT = 3,
  CDSP_DEGREE_TOO_LARGE = 4,
  CDSP_NOT_POSITIVE_ON_CIRCLE = 5,
  CDSP_ROOT_ON_CIRCLE = 6,
  CDSP_EMPTY_MEASURE = 7,
  CDSP_ATOMS_NOT_DISTINCT = 8,
  CDSP_NOT_UNIMODULAR = 9,
  CDSP_GRAM_SINGULAR = 10,
  CDSP_ETA_NOT_PSD = 11,
  CDSP_NOT_SCHUR = 12,
  CDSP_EXTREME_POINT = 13,
  CDSP_GRID_OUTSIDE_DISC = 14,
  CDSP_INSUFFICIENT_ROWS = 15,
  CDSP_INSUFFICIENT_LENGTH = 16,
  CDSP_INPUT_SCHEMA = 17,
  CDSP_INTERNAL = 18
} cdsp_status;

typedef enum cdsp_verdict {
  CDSP_CERTIFIED_SUBNORMAL = 0,
  CDSP_REFUTED_AT_LEVEL = 1,
  CDSP_INCONCLUSIVE_AT_TRUNCATION = 2
} cdsp_verdict;

typedef struct cdsp_complex {
  double re;
  double im;
} cdsp_complex;

typedef struct cdsp_config {
  int levels;       /* max Agler level L, default 12 */
  int trunc;        /* matrix truncation N, default 40 */
  double tol_psd;   /* default 1e-8 */
  double tol_orth;  /* default 1e-9 */
  int quad_points;  /* rank-one measure quadrature, default 4096 */
  int dump_tables;  /* nonzero adds the K and B_rows tables to the report */
} cdsp_config;

typedef struct cdsp_measure cdsp_measure;
typedef struct cdsp_symbol cdsp_symbol;
typedef struct cdsp_report cdsp_report;
typedef struct cdsp_run cdsp_run;

CDSP_API const char* cdsp_version(void);
CDSP_API const char* cdsp_status_name(cdsp_status status);
/* Message of the last failing call on this thread; "" if none. */
CDSP_API const char* cdsp_last_error(void);

CDSP_API cdsp_config cdsp_config_default(void);

/* Atoms exp(i thetas[j]) with weights[j] >= 0; zero weights are dropped. */
CDSP_API cdsp_status cdsp_measure_create(const double* thetas, const double* weights, size_t count,
                                         cdsp_measure** out);
CDSP_API void cdsp_measure_destroy(cdsp_measure* mu);
CDSP_API size_t cdsp_measure_size(const cdsp_measure* mu);
/* Mass c_j moved to conj(zeta) zeta_j. */
CDSP_API cdsp_status cdsp_measure_rotate(const cdsp_measure* mu, cdsp_complex zeta, cdsp_measure** out);

CDSP_API cdsp_status cdsp_symbol_from_measure(const cdsp_measure* mu, cdsp_symbol** out);
/* numerator_coeffs is row-major numerator_count x coeffs_per_numerator,
 * entry (j, m) the coefficient of z^m in p_j. */
CDSP_API cdsp_status cdsp_symbol_create(const cdsp_complex* alphas, size_t pole_count,
                                        const cdsp_complex* numerator_coeffs, size_t numerator_count,
                                        size_t coeffs_per_numerator, cdsp_symbol** out);
CDSP_API void cdsp_symbol_destroy(cdsp_symbol* b);
CDSP_API size_t cdsp_symbol_pole_count(const cdsp_symbol* b);
CDSP_API size_t cdsp_symbol_numerator_count(const cdsp_symbol* b);
/* Copies min(capacity, pole_count) poles. */
CDSP_API cdsp_status cdsp_symbol_alphas(const cdsp_symbol* b, cdsp_complex* out, size_t capacity);
/* CDSP_INVALID_ARGUMENT when the symbol carries no factorization constant. */
CDSP_API cdsp_status cdsp_symbol_gamma_fr(const cdsp_symbol* b, double* out);
/* sum_j b_j(z) conj(b_j(w)) */
CDSP_API cdsp_status cdsp_symbol_eta(const cdsp_symbol* b, cdsp_complex z, cdsp_complex w, cdsp_complex* out);

CDSP_API cdsp_status cdsp_certify(const cdsp_symbol* b, const cdsp_config* config, cdsp_report** out);
CDSP_API void cdsp_report_destroy(cdsp_report* r);
CDSP_API cdsp_verdict cdsp_report_verdict(const cdsp_report* r);
/* -1 unless the verdict is a refutation */
CDSP_API int cdsp_report_refuted_level(const cdsp_report* r);
CDSP_API double cdsp_report_orthogonality_residual(const cdsp_report* r);
CDSP_API int cdsp_report_is_exact(const cdsp_report* r);
CDSP_API size_t cdsp_report_level_count(const cdsp_report* r);
/* Pole-form Agler matrix at index i (level i + 1). */
CDSP_API cdsp_status cdsp_report_level(const cdsp_report* r, size_t i, int* level, double* min_eig, double* norm);
CDSP_API int cdsp_report_exit_code(const cdsp_report* r);

/* Full run on a JSON input document. timestamp may be NULL (current time). */
CDSP_API cdsp_status cdsp_run_json(const char* input_json, const cdsp_config* config, const char* timestamp,
                                   cdsp_run** out);
CDSP_API void cdsp_run_destroy(cdsp_run* run);
CDSP_API const char* cdsp_run_report_json(const cdsp_run* run);
CDSP_API int cdsp_run_exit_code(const cdsp_run* run);

#ifdef __cplusplus
}
#endif

#endif
