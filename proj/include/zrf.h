/*
 * zrf -- C API for the random Euler-product field toolkit.
 *
 * Every function returns a zrf_status; results come back through out
 * parameters.  On failure, zrf_last_error_message() returns a
 * thread-local description valid until the next zrf call on the same
 * thread.  Opaque handles are created and released by the matching
 * *_create / *_free pair; handles keep whatever they reference alive
 * (a sample holds its band).
 */

#ifndef ZRF_H
#define ZRF_H

#include <stddef.h>
#include <stdint.h>

#if defined(ZRF_BUILD_SHARED)
#define ZRF_API __attribute__((visibility("default")))
#else
#define ZRF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t zrf_status;

enum {
    ZRF_OK = 0,
    ZRF_ERROR_ARGUMENT = 1, /* precondition or hypothesis violation */
    ZRF_ERROR_RESOURCE = 2, /* configured ceiling exceeded, or I/O failure */
    ZRF_ERROR_INTERNAL = 3
};

enum {
    ZRF_TARGET_VALUE = 0,     /* the field */
    ZRF_TARGET_DERIVATIVE = 1 /* its h-derivative */
};

enum {
    ZRF_FORM_POINT_TAIL = 0,
    ZRF_FORM_CONTINUITY = 1,
    ZRF_FORM_JOINT_INCREMENT = 2
};

ZRF_API const char* zrf_version_string(void);
ZRF_API const char* zrf_last_error_message(void);

/* ---------------- primes and bands ---------------- */

typedef struct zrf_primes zrf_primes;
typedef struct zrf_band zrf_band;

/* All primes <= limit.  cache_dir may be NULL; when given, a binary cache
 * file keyed by the limit is consulted and refreshed there. */
ZRF_API zrf_status zrf_primes_sieve(uint64_t limit, const char* cache_dir,
                                    zrf_primes** out);
ZRF_API void zrf_primes_free(zrf_primes* primes);
ZRF_API zrf_status zrf_primes_count(const zrf_primes* primes, uint64_t* out);
ZRF_API zrf_status zrf_primes_data(const zrf_primes* primes,
                                   const uint64_t** data, uint64_t* count);

/* Band of primes with 2^r < log p <= 2^k, -1 <= r <= k. */
ZRF_API zrf_status zrf_band_create(int32_t r, int32_t k, const char* cache_dir,
                                   zrf_band** out);
ZRF_API void zrf_band_free(zrf_band* band);
ZRF_API zrf_status zrf_band_size(const zrf_band* band, uint64_t* out);
ZRF_API zrf_status zrf_band_scale(const zrf_band* band, double* out);
ZRF_API zrf_status zrf_band_entry(const zrf_band* band, uint64_t index,
                                  uint64_t* p, double* log_p, double* inv_sqrt_p);
/* 2^{2k} - 2^{2r} without building any band. */
ZRF_API zrf_status zrf_band_scale_value(int32_t r, int32_t k, double* out);

/* sum_{P < p <= Q} (log p)^m / p, and its distance from
 * ((log Q)^m - (log P)^m) / m. */
ZRF_API zrf_status zrf_prime_log_power_sum(double P, double Q, uint32_t m,
                                           const char* cache_dir, double* out);
ZRF_API zrf_status zrf_lemma_a1_residual(double P, double Q, uint32_t m,
                                         const char* cache_dir, double* out);

/* ---------------- field samples ---------------- */

typedef struct zrf_sample zrf_sample;

ZRF_API zrf_status zrf_sample_create(const zrf_band* band, uint64_t seed,
                                     zrf_sample** out);
ZRF_API void zrf_sample_free(zrf_sample* sample);
ZRF_API zrf_status zrf_sample_size(const zrf_sample* sample, uint64_t* out);
ZRF_API zrf_status zrf_sample_theta(const zrf_sample* sample, uint64_t index,
                                    double* out);

ZRF_API zrf_status zrf_field_value(const zrf_sample* sample, double h, double* out);
ZRF_API zrf_status zrf_field_derivative(const zrf_sample* sample, double h,
                                        double* out);
ZRF_API zrf_status zrf_field_batch(const zrf_sample* sample, int32_t target,
                                   const double* grid, uint64_t count, double* out);

/* sum (log p)^order / sqrt(p); order in {1,2,3}. */
ZRF_API zrf_status zrf_deriv_sup_bound(const zrf_band* band, int32_t order,
                                       double* out);
/* sum (log p)^2 / (2p). */
ZRF_API zrf_status zrf_variance_derivative(const zrf_band* band, double* out);

typedef struct {
    double arg_h;
    double value;
    double upper_bound;
    double grid_step;
    double lipschitz_used;
} zrf_certified_max;

ZRF_API zrf_status zrf_certified_max_scan(const zrf_sample* sample, double lo,
                                          double hi, int32_t target,
                                          double resolution, zrf_certified_max* out);
/* 2^{-3k}/64, the default certification step on band (r, k). */
ZRF_API zrf_status zrf_default_resolution(int32_t k, double* out);

/* ---------------- closed-form bounds ---------------- */

ZRF_API zrf_status zrf_bessel_i0(double u, double* out);
ZRF_API zrf_status zrf_log_i0_expansion(double u, double* out);
/* Both sides of (1/2pi) int exp(a cos t + b sin t) dt = I0(sqrt(a^2+b^2)). */
ZRF_API zrf_status zrf_circular_mgf_identity(double a, double b, double* quadrature,
                                             double* series);
ZRF_API zrf_status zrf_mgf_derivative_single(uint64_t p, double lambda, double* out);
ZRF_API zrf_status zrf_mgf_derivative_single_quadrature(uint64_t p, double lambda,
                                                        double* out);
ZRF_API zrf_status zrf_mgf_derivative_joint(uint64_t p, double lambda1,
                                            double lambda2, double h1, double h2,
                                            double* out);
ZRF_API zrf_status zrf_mgf_derivative_joint_quadrature(uint64_t p, double lambda1,
                                                       double lambda2, double h1,
                                                       double h2, double* out);

ZRF_API zrf_status zrf_chernoff_lambda1(double x, double v, double* out);
ZRF_API zrf_status zrf_chernoff_lambda2(double y, double h1, double h2, int32_t k,
                                        double* out);

typedef struct {
    int32_t r;
    int32_t k;
    double hypothesis_c; /* C  */
    double lead_c;       /* c  */
    double decay_c;      /* c~ */
} zrf_bound_params;

ZRF_API zrf_status zrf_bound_lemma41(const zrf_bound_params* params, double x,
                                     double* out);
ZRF_API zrf_status zrf_bound_prop31(const zrf_bound_params* params, double x,
                                    double a, double* out);
ZRF_API zrf_status zrf_bound_prop32(const zrf_bound_params* params, double x,
                                    double* out);
ZRF_API zrf_status zrf_bound_lemma42(const zrf_bound_params* params, double x,
                                     double y, double h1, double h2, double* out);

typedef struct zrf_grid zrf_grid;

/* ceil(L sqrt(2^{2k} - 2^{2r}) sqrt(k log 2)) equidistant points in [0,1]. */
ZRF_API zrf_status zrf_grid_create(int32_t r, int32_t k, double l_factor,
                                   zrf_grid** out);
ZRF_API void zrf_grid_free(zrf_grid* grid);
ZRF_API zrf_status zrf_grid_count(const zrf_grid* grid, uint64_t* out);
ZRF_API zrf_status zrf_grid_points(const zrf_grid* grid, const double** data,
                                   uint64_t* count);

ZRF_API zrf_status zrf_theorem_bound(int32_t k, double big_k, double l_factor,
                                     double* out);
ZRF_API zrf_status zrf_required_l(double big_k, double margin_m, double* out);

/* ---------------- Monte Carlo experiments ---------------- */

typedef struct {
    int32_t r;
    int32_t k;
    uint64_t n_trials;
    uint64_t base_seed;
    double resolution;   /* <= 0 picks the default for k */
    double ci_level;
    double hypothesis_c; /* C */
    int32_t threads;     /* 0 picks hardware concurrency */
} zrf_trial_config;

typedef struct {
    double threshold;
    uint64_t hits;
    uint64_t ambiguous;
    uint64_t n;
    double p_hat;
    double ci_lo;
    double ci_hi;
} zrf_tail_estimate;

ZRF_API zrf_status zrf_exact_binomial_ci(uint64_t hits, uint64_t n, double level,
                                         double* lo, double* hi);

ZRF_API zrf_status zrf_estimate_point_tail(const zrf_trial_config* cfg,
                                           const char* cache_dir, const double* xs,
                                           uint64_t count, zrf_tail_estimate* out);
ZRF_API zrf_status zrf_estimate_interval_max_tail(const zrf_trial_config* cfg,
                                                  const char* cache_dir, double h,
                                                  double x, zrf_tail_estimate* out);
ZRF_API zrf_status zrf_estimate_continuity_event(const zrf_trial_config* cfg,
                                                 const char* cache_dir, double h,
                                                 double x, double a,
                                                 zrf_tail_estimate* out);
ZRF_API zrf_status zrf_estimate_joint_increment(const zrf_trial_config* cfg,
                                                const char* cache_dir, double x,
                                                double y, double h1, double h2,
                                                zrf_tail_estimate* out);

typedef struct {
    double gap_min;
    double gap_max;
    double gap_mean;
    uint64_t negative_gap_trials;
    zrf_tail_estimate exceed;
    double bound;
    uint64_t grid_count;
} zrf_gap_result;

ZRF_API zrf_status zrf_gap_experiment(const zrf_trial_config* cfg,
                                      const char* cache_dir, double big_k,
                                      double l_factor, zrf_gap_result* out);

typedef struct {
    double lead_c;    /* c  */
    double decay_c;   /* c~ */
    int32_t feasible; /* 0 indicates a fit failure */
} zrf_fit_result;

/* Smallest dominating constants for the selected bound form.  v is the
 * band scale; x, h1, h2, k are the fixed event parameters where the form
 * needs them. */
ZRF_API zrf_status zrf_fit_constants(const zrf_tail_estimate* estimates,
                                     uint64_t count, int32_t form, double v,
                                     double x, double h1, double h2, int32_t k,
                                     zrf_fit_result* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ZRF_H */
