#ifndef PROFILIUM_PROFILIUM_H
#define PROFILIUM_PROFILIUM_H

#include <stddef.h>
#include <stdint.h>

#if defined(PROFILIUM_BUILDING_LIBRARY)
#define PROF_API __attribute__((visibility("default")))
#else
#define PROF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum prof_status {
    PROF_OK = 0,
    PROF_ERR_DOMAIN = 1,
    PROF_ERR_RESOURCE = 2,
    PROF_ERR_NUMERIC = 3,
    PROF_ERR_BOUNDARY = 4,
    PROF_ERR_REGIME = 5,
    PROF_ERR_CERTIFICATE = 6,
    PROF_ERR_INVALID = 7
} prof_status;

typedef enum prof_regime_class {
    PROF_REGIME_SMALL = 0,
    PROF_REGIME_SADDLE = 1,
    PROF_REGIME_POLAR = 2
} prof_regime_class;

typedef enum prof_exact_method {
    PROF_EXACT_ENUMERATION = 0,
    PROF_EXACT_DP = 1,
    PROF_EXACT_ROOTS = 2
} prof_exact_method;

/* Message for the last failing call on this thread; never NULL. */
PROF_API const char* prof_last_error(void);
PROF_API const char* prof_status_name(prof_status s);
PROF_API const char* prof_version(void);

/* Model: p, and either (n, k) or (alpha, n) with k = round(alpha ln n). */
typedef struct prof_model prof_model;

PROF_API prof_status prof_model_create(double p, prof_model** out);
PROF_API void prof_model_destroy(prof_model* m);
PROF_API prof_status prof_model_set_nk(prof_model* m, uint64_t n, int k);
PROF_API prof_status prof_model_set_alpha(prof_model* m, double alpha, uint64_t n);
PROF_API prof_status prof_model_get(const prof_model* m, double* p, double* alpha, uint64_t* n, int* k);
/* k / ln n for the current (n, k). */
PROF_API prof_status prof_model_effective_alpha(const prof_model* m, double* out);

typedef struct prof_regime_info {
    double alpha1;
    double alpha2;
    double margin;
    prof_regime_class regime;
} prof_regime_info;

PROF_API prof_status prof_thresholds(double p, double* alpha1, double* alpha2);
/* Classifies alpha (alpha <= 0 uses the model's effective alpha). */
PROF_API prof_status prof_regimes(const prof_model* m, double alpha, prof_regime_info* out);

PROF_API prof_status prof_word_probability(const prof_model* m, const char* u, double* out);
/* coeffs[i] receives the coefficient of z^i; *len is the number written. */
PROF_API prof_status prof_correlation_poly(const prof_model* m, const char* u, const char* v, double* coeffs,
                                           size_t capacity, size_t* len);

typedef struct prof_pair_stats {
    double P, Theta, K, Q, T;
    int has_overlap;
    int ell, i, j;
} prof_pair_stats;

PROF_API prof_status prof_pair_stats_compute(const prof_model* m, const char* u, const char* v, prof_pair_stats* out);
PROF_API prof_status prof_correlation_decay_sums(const prof_model* m, int k, double* self_sum, double* cross_sum);

typedef struct prof_exact_result {
    double value;
    double error_scale;     /* roots method: rho_disc^{-n}; otherwise 0 */
    int certificate_failures;
    int near_coincident;
} prof_exact_result;

/* exact_mode != 0 evaluates in rational arithmetic (enumeration and dp); the rational is
   written to rational_buf when provided. */
PROF_API prof_status prof_exact_variance(const prof_model* m, prof_exact_method method, int exact_mode,
                                         prof_exact_result* out, char* rational_buf, size_t buf_len);

typedef struct prof_sample {
    double mean;
    double variance;
    double stderr_variance;
    double full_level_fraction;
    uint64_t replicates;
} prof_sample;

/* threads == 0 reads PROFILIUM_THREADS; the result does not depend on the thread count. */
PROF_API prof_status prof_simulate(const prof_model* m, uint64_t replicates, uint64_t seed, unsigned threads,
                                   prof_sample* out);

typedef struct prof_truncation {
    int y_max;
    int m_max;
    int ell_max; /* 0: all */
    double tail_tol;
} prof_truncation;

PROF_API void prof_truncation_default(prof_truncation* t);

typedef struct prof_variance_report {
    double value;
    double printed_value;
    double c1, c1_printed, c2;
    double c1_term, c2_term;
    double exponent;
    double log_factor;
    double alpha_eff;
    double tail;
    prof_regime_class regime;
    int small_regime_flag;
    int y_used, m_used, ell_used;
    int boundary_classes;
    int classes_small, classes_saddle, classes_polar;
} prof_variance_report;

PROF_API prof_status prof_asymptotic(const prof_model* m, const prof_truncation* t, prof_variance_report* out);

typedef struct prof_vterms {
    double v1, v2, v3tilde, v3;
    double assembled;
    int v2_is_bound;
    int has_v3;
} prof_vterms;

PROF_API prof_status prof_vterms_compute(const prof_model* m, int with_exact_v3, prof_vterms* out);

typedef struct prof_landscape prof_landscape;

typedef struct prof_landscape_options {
    const double* r_values;
    size_t r_count;
    int cd_points;
    int r_points;
    double r_max;
    double r0;
    int finite_k; /* 0: limit form */
} prof_landscape_options;

typedef struct prof_landscape_slice {
    double r;
    int omega_nonempty;
    double c_star, d_star, g_max;
    double c_m, F;
    int cells_off_diagonal;
} prof_landscape_slice;

typedef struct prof_landscape_summary {
    prof_regime_class regime;
    double alpha;
    double F0, F_prime0, h_rho;
    double max_second_diff;
    int concave;
    double tail_bound, tail_max;
    int tail_ok;
    size_t slices;
    size_t r_points;
} prof_landscape_summary;

PROF_API void prof_landscape_options_default(prof_landscape_options* o);
/* alpha <= 0 uses the model's alpha. */
PROF_API prof_status prof_landscape_compute(const prof_model* m, double alpha, const prof_landscape_options* o,
                                            prof_landscape** out);
PROF_API void prof_landscape_destroy(prof_landscape* l);
PROF_API prof_status prof_landscape_get_summary(const prof_landscape* l, prof_landscape_summary* out);
PROF_API prof_status prof_landscape_get_slice(const prof_landscape* l, size_t i, prof_landscape_slice* out);
PROF_API prof_status prof_landscape_get_F(const prof_landscape* l, size_t i, double* r, double* F);

#ifdef __cplusplus
}
#endif

#endif
