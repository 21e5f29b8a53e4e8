/* C interface to the psrm library.
 *
 * Every fallible call returns a psrm_status; on failure psrm_last_error()
 * holds a message for the calling thread. Handles are opaque and owned by
 * the caller, who releases them with the matching *_destroy function
 * (passing NULL is allowed). Strings returned as const char* stay valid
 * until the owning handle is modified or destroyed.
 */
#ifndef PSRM_PSRM_H
#define PSRM_PSRM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PSRM_BUILDING_LIBRARY)
#define PSRM_API __declspec(dllexport)
#else
#define PSRM_API __declspec(dllimport)
#endif
#else
#define PSRM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum psrm_status {
  PSRM_OK = 0,
  PSRM_ERR_INVALID_ARGUMENT = 1,
  PSRM_ERR_DIMENSION_MISMATCH = 2,
  PSRM_ERR_NO_CONVERGENCE = 3,
  PSRM_ERR_DOMAIN = 4,
  PSRM_ERR_IO = 5,
  PSRM_ERR_PARSE = 6,
  PSRM_ERR_BUFFER_TOO_SMALL = 7,
  PSRM_ERR_INTERNAL = 8
} psrm_status;

PSRM_API const char* psrm_version(void);
PSRM_API const char* psrm_last_error(void);
PSRM_API const char* psrm_status_name(psrm_status status);

/* ---- analytic curves and special functions ---- */

PSRM_API psrm_status psrm_wigner_surmise(double s, double* out);
PSRM_API psrm_status psrm_wigner_cdf(double s, double* out);
PSRM_API psrm_status psrm_poisson_cdf(double s, double* out);
PSRM_API psrm_status psrm_semicircle(double eps, double* out);
PSRM_API psrm_status psrm_semicircle_cdf(double eps, double* out);
PSRM_API psrm_status psrm_bessel_i0(double x, double* out);
PSRM_API psrm_status psrm_elliptic_e(double m, double* out);
PSRM_API psrm_status psrm_spacing_2x2(double s, double lambda, double* out);
PSRM_API psrm_status psrm_spacing_2x2_cdf(double s, double lambda, double* out);
PSRM_API psrm_status psrm_jpdf_2x2(double e1, double e2, double lambda, double* out);
PSRM_API psrm_status psrm_jpdf_normalizer(double lambda, double* out);
PSRM_API psrm_status psrm_eig2x2_q1(double a11, double a12, double a22, double lambda,
                                    double* e1, double* e2, double* spacing);

/* ---- dense matrices ---- */

typedef struct psrm_matrix psrm_matrix;

/* row_major holds n*n finite values; NULL gives the zero matrix. */
PSRM_API psrm_status psrm_matrix_create(size_t n, const double* row_major, psrm_matrix** out);
PSRM_API void psrm_matrix_destroy(psrm_matrix* m);
PSRM_API size_t psrm_matrix_dim(const psrm_matrix* m);
PSRM_API psrm_status psrm_matrix_get(const psrm_matrix* m, double* row_major, size_t len);

/* ---- random streams and ensembles of symmetric matrices ---- */

typedef struct psrm_rng psrm_rng;

PSRM_API psrm_status psrm_rng_create(uint64_t seed, uint64_t stream, psrm_rng** out);
PSRM_API void psrm_rng_destroy(psrm_rng* rng);
PSRM_API psrm_status psrm_rng_uniform01(psrm_rng* rng, double* out);
PSRM_API psrm_status psrm_rng_gaussian(psrm_rng* rng, double* out);

/* pdf: "gaussian" or "uniform". Off-diagonal variance sigma^2, diagonal 2 sigma^2. */
PSRM_API psrm_status psrm_sample_symmetric(size_t n, const char* pdf, double sigma,
                                           psrm_rng* rng, psrm_matrix** out);

/* weight: 0 = exp(-tr(Q Q^t)/2) weight, 1 = doubled-diagonal convention.
 * Writes count spacings rescaled to unit mean. */
PSRM_API psrm_status psrm_sample_q1_2x2_spacings(double lambda, size_t count, int weight,
                                                 psrm_rng* rng, double* out);

/* ---- spectra ---- */

typedef struct psrm_spectrum psrm_spectrum;

PSRM_API void psrm_spectrum_destroy(psrm_spectrum* s);
PSRM_API size_t psrm_spectrum_real_count(const psrm_spectrum* s);
PSRM_API size_t psrm_spectrum_pair_count(const psrm_spectrum* s);
/* Ascending real eigenvalues. */
PSRM_API psrm_status psrm_spectrum_real(const psrm_spectrum* s, double* out, size_t len);
/* One entry per conjugate pair, imaginary part > 0. */
PSRM_API psrm_status psrm_spectrum_pairs(const psrm_spectrum* s, double* re, double* im,
                                         size_t len);

/* Real Schur based solver for any real square matrix. */
PSRM_API psrm_status psrm_general_eigen(const psrm_matrix* a, psrm_spectrum** out);
/* Symmetric solver; values ascending. vectors may be NULL. */
PSRM_API psrm_status psrm_symmetric_eigen(const psrm_matrix* a, double* values, size_t len,
                                          psrm_matrix** vectors);

/* ---- pseudo-symmetric families ----
 * family: q1 q2 r1 r2 r3 gq1 gq2 gr1 gr2 gr3. mu is ignored for q* and r*. */

typedef enum psrm_metric_kind { PSRM_METRIC_ETA = 0, PSRM_METRIC_ZETA = 1 } psrm_metric_kind;

PSRM_API psrm_status psrm_family_construct(const char* family, double lambda, double mu,
                                           const psrm_matrix* m, psrm_matrix** out);
/* Diagonal of the metric, n entries. */
PSRM_API psrm_status psrm_family_metric(const char* family, double lambda, double mu, size_t n,
                                        psrm_metric_kind kind, double* diagonal);
PSRM_API psrm_status psrm_family_associated_symmetric(const char* family, double lambda,
                                                      double mu, const psrm_matrix* m,
                                                      psrm_matrix** out);
PSRM_API psrm_status psrm_family_diagonalizer(const char* family, double lambda, double mu,
                                              const psrm_matrix* d, psrm_matrix** out);
/* All-real spectrum from one symmetric eigensolve; lambda * mu > 0 only. */
PSRM_API psrm_status psrm_family_fastpath(const char* family, double lambda, double mu,
                                          const psrm_matrix* m, psrm_spectrum** out);

/* ---- identity checks ---- */

typedef struct psrm_residual {
  double residual;
  double scale;
  double tolerance;
  int passed; /* residual <= tolerance * scale */
} psrm_residual;

/* tol <= 0 selects the library default. */
PSRM_API psrm_status psrm_check_pseudo_symmetry(const psrm_matrix* h, const double* eta_diagonal,
                                                double tol, psrm_residual* out);
PSRM_API psrm_status psrm_check_pseudo_orthogonality(const psrm_matrix* dcal,
                                                     const double* zeta_diagonal, double tol,
                                                     psrm_residual* out);
PSRM_API psrm_status psrm_check_diagonalization(const psrm_matrix* h, const psrm_matrix* dcal,
                                                double tol, psrm_residual* out);

/* ---- spectral statistics ---- */

/* method: "polynomial" or "semicircle". Sets count; out may be NULL with
 * len 0 to query the size only. */
PSRM_API psrm_status psrm_unfold(const double* levels, size_t n, const char* method, int degree,
                                 double trim, double* out, size_t len, size_t* count);

typedef double (*psrm_cdf_fn)(double x, void* context);
PSRM_API psrm_status psrm_ks_distance(const double* sample, size_t n, psrm_cdf_fn cdf,
                                      void* context, double* out);
PSRM_API psrm_status psrm_ks_two_sample(const double* a, size_t na, const double* b, size_t nb,
                                        double* out);

/* ---- run configuration ---- */

typedef struct psrm_config psrm_config;

/* Defaults: q1, n 200, count 1000, lambda = mu = 0.9, gaussian, sigma 1,
 * seed 1, polynomial unfolding of degree 7, 50 bins, trim 0.02, threads from
 * PSRM_THREADS. */
PSRM_API psrm_status psrm_config_create(psrm_config** out);
PSRM_API void psrm_config_destroy(psrm_config* cfg);
/* key: family n count lambda mu pdf sigma seed unfold degree bins trim
 * threads pooled. Values are parsed from text; validation is deferred to
 * psrm_config_validate. */
PSRM_API psrm_status psrm_config_set(psrm_config* cfg, const char* key, const char* value);
PSRM_API psrm_status psrm_config_validate(psrm_config* cfg);
PSRM_API const char* psrm_config_header(const psrm_config* cfg);
PSRM_API psrm_status psrm_config_from_header(const char* line, psrm_config** out);

/* ---- ensembles ---- */

typedef struct psrm_ensemble psrm_ensemble;

PSRM_API psrm_status psrm_ensemble_generate(const psrm_config* cfg, psrm_ensemble** out);
/* path "-" means stdin / stdout. */
PSRM_API psrm_status psrm_ensemble_read(const char* path, psrm_ensemble** out);
PSRM_API psrm_status psrm_ensemble_write(const psrm_ensemble* e, const char* path);
PSRM_API void psrm_ensemble_destroy(psrm_ensemble* e);
PSRM_API size_t psrm_ensemble_size(const psrm_ensemble* e);
PSRM_API size_t psrm_ensemble_failures(const psrm_ensemble* e);
/* PSRM_ERR_NO_CONVERGENCE for a record whose solve failed. */
PSRM_API psrm_status psrm_ensemble_record(const psrm_ensemble* e, size_t i, psrm_spectrum** out);
PSRM_API psrm_status psrm_ensemble_config(const psrm_ensemble* e, psrm_config** out);

/* ---- ensemble statistics ---- */

typedef struct psrm_stats psrm_stats;

typedef struct psrm_stats_summary {
  size_t matrices_used;
  size_t matrices_skipped;
  size_t matrices_failed;
  size_t matrices_with_pairs;
  size_t n_real;
  size_t n_pairs;
  size_t n_spacings;
  double reality_fraction;
  double spacing_mean; /* NaN without spacings */
  double ks_wigner;    /* NaN without spacings */
  double ks_poisson;   /* NaN without spacings */
} psrm_stats_summary;

typedef enum psrm_histogram_kind { PSRM_HIST_NLSD = 0, PSRM_HIST_DENSITY = 1 } psrm_histogram_kind;

/* analysis may be NULL; otherwise its unfold, degree, trim, bins, pooled
 * and threads settings replace those recorded with the ensemble. */
PSRM_API psrm_status psrm_stats_compute(const psrm_ensemble* e, const psrm_config* analysis,
                                        psrm_stats** out);
PSRM_API void psrm_stats_destroy(psrm_stats* s);
PSRM_API psrm_status psrm_stats_get_summary(const psrm_stats* s, psrm_stats_summary* out);
PSRM_API const char* psrm_stats_summary_json(const psrm_stats* s);
/* Views valid for the lifetime of the handle; bins may be 0. */
PSRM_API psrm_status psrm_stats_histogram(const psrm_stats* s, psrm_histogram_kind kind,
                                          size_t* bins, const double** edges,
                                          const double** densities);
PSRM_API psrm_status psrm_stats_spacings(const psrm_stats* s, const double** values,
                                         size_t* count);
PSRM_API psrm_status psrm_stats_rescaled_levels(const psrm_stats* s, const double** values,
                                                size_t* count);
/* prefix.nlsd.csv, prefix.density.csv, prefix.summary.json */
PSRM_API psrm_status psrm_stats_write(const psrm_stats* s, const char* prefix);

/* ---- verification suite ---- */

typedef struct psrm_verify_report psrm_verify_report;

/* inject_fault != 0 perturbs every H by 1e-3 in one corner entry. */
PSRM_API psrm_status psrm_verify_run(const psrm_config* cfg, int inject_fault,
                                     psrm_verify_report** out);
PSRM_API void psrm_verify_destroy(psrm_verify_report* r);
PSRM_API int psrm_verify_passed(const psrm_verify_report* r);
PSRM_API const char* psrm_verify_json(const psrm_verify_report* r);

/* ---- tables ---- */

/* curve: wigner, semicircle, spacing2x2. path "-" means stdout. */
PSRM_API psrm_status psrm_curve_write(const char* curve, double lambda, double lo, double hi,
                                      size_t points, const char* path);

typedef struct psrm_sweep_row {
  double lambda;
  double mu;
  double reality_fraction;
  double ks_wigner; /* NaN when no matrix had enough real levels */
} psrm_sweep_row;

/* rows may be NULL, otherwise it receives n_lambdas * n_mus rows (lambda
 * major). path may be NULL to skip the file. */
PSRM_API psrm_status psrm_sweep(const psrm_config* base, const double* lambdas, size_t n_lambdas,
                                const double* mus, size_t n_mus, psrm_sweep_row* rows,
                                const char* path);

#ifdef __cplusplus
}
#endif

#endif /* PSRM_PSRM_H */
