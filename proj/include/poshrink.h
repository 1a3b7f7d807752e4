/* SPDX-License-Identifier: Apache-2.0 */
#ifndef POSHRINK_H
#define POSHRINK_H

#include <stddef.h>
#include <stdint.h>

#if defined(POSHRINK_BUILDING_LIBRARY)
#define POSHRINK_API __attribute__((visibility("default")))
#else
#define POSHRINK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every function returning poshrink_status leaves a message for the calling
 * thread in poshrink_last_error() when it fails. Strings handed out through
 * char** parameters are owned by the caller and released with
 * poshrink_string_free(). */

typedef enum poshrink_status {
  POSHRINK_OK = 0,
  POSHRINK_E_INVALID_ARGUMENT = 1,
  POSHRINK_E_PARSE = 2,
  POSHRINK_E_UNSUPPORTED_DIMENSION = 3,
  POSHRINK_E_COST = 4,
  POSHRINK_E_DOMAIN = 5,
  POSHRINK_E_INTEGRABILITY = 6,
  POSHRINK_E_SINGULARITY = 7,
  POSHRINK_E_IO = 8,
  POSHRINK_E_INTERNAL = 9
} poshrink_status;

typedef enum poshrink_risk_method {
  POSHRINK_EXACT_SUM = 0,
  POSHRINK_MONTE_CARLO = 1,
  POSHRINK_HYBRID = 2
} poshrink_risk_method;

typedef enum poshrink_backend {
  POSHRINK_QUADRATURE = 0,
  POSHRINK_MONTE_CARLO_F = 1
} poshrink_backend;

typedef struct poshrink_problem poshrink_problem;
typedef struct poshrink_prior poshrink_prior;

typedef struct poshrink_mc_options {
  size_t outer_n;      /* draws of (x, y) for risk reductions */
  size_t inner_n;      /* samples per Monte Carlo F evaluation */
  uint64_t seed;
  double singular_eps; /* smoothing for sym-subspace priors with eps = 0 */
  size_t blocks;       /* median-of-means blocks for smoothed singular priors */
  int use_cache;
} poshrink_mc_options;

typedef struct poshrink_risk {
  double value;
  double std_error;
  poshrink_risk_method method;
  size_t outer_n;
  size_t inner_n;
  uint64_t seed;
  int infinite;
} poshrink_risk;

typedef struct poshrink_metrics {
  double kl_dist;
  double ws_dist;
  double loglik;
  double loglik_se;
  int kl_infinite;
} poshrink_metrics;

POSHRINK_API const char* poshrink_version(void);
POSHRINK_API const char* poshrink_last_error(void);
POSHRINK_API const char* poshrink_status_name(poshrink_status status);
POSHRINK_API void poshrink_string_free(char* text);

/* 0 restores the default (POSHRINK_THREADS, else hardware concurrency). */
POSHRINK_API void poshrink_set_threads(size_t threads);

POSHRINK_API void poshrink_mc_options_default(poshrink_mc_options* options);

/* Problem: durations r and s for d coordinates. */
POSHRINK_API poshrink_status poshrink_problem_create(const double* r, const double* s,
                                                     size_t d, poshrink_problem** out);
POSHRINK_API void poshrink_problem_free(poshrink_problem* problem);
POSHRINK_API size_t poshrink_problem_dim(const poshrink_problem* problem);
POSHRINK_API poshrink_status poshrink_problem_gamma(const poshrink_problem* problem,
                                                    double* gamma_out);

/* Prior from the grammar text; check_hypotheses != 0 rejects shrinkage
 * priors outside their dominance result. */
POSHRINK_API poshrink_status poshrink_prior_parse(const char* text, size_t d,
                                                  int check_hypotheses,
                                                  poshrink_prior** out);
POSHRINK_API void poshrink_prior_free(poshrink_prior* prior);
POSHRINK_API size_t poshrink_prior_dim(const poshrink_prior* prior);
POSHRINK_API int poshrink_prior_is_shrinkage(const poshrink_prior* prior);
POSHRINK_API poshrink_status poshrink_prior_describe(const poshrink_prior* prior,
                                                     char** out);
/* JSON verdict {certified, proposition, violations, notes, target_in_orthant}. */
POSHRINK_API poshrink_status poshrink_prior_certify(const poshrink_prior* prior,
                                                    char** json_out);

/* log F(z, t) for a shrinkage prior. */
POSHRINK_API poshrink_status poshrink_log_F(const poshrink_prior* prior,
                                            const poshrink_problem* problem,
                                            const int64_t* z, const double* t,
                                            const poshrink_mc_options* options,
                                            double* log_value, double* std_error,
                                            poshrink_backend* backend);

POSHRINK_API poshrink_status poshrink_log_predictive(const poshrink_prior* prior,
                                                     const poshrink_problem* problem,
                                                     const int64_t* x, const int64_t* y,
                                                     const poshrink_mc_options* options,
                                                     double* value, double* std_error);

POSHRINK_API poshrink_status poshrink_predictive_mean(const poshrink_prior* prior,
                                                      const poshrink_problem* problem,
                                                      const int64_t* x,
                                                      const poshrink_mc_options* options,
                                                      double* mean_out);

/* n draws of y (row-major n x d) for power and gamma priors. */
POSHRINK_API poshrink_status poshrink_sample_predictive(const poshrink_prior* prior,
                                                        const poshrink_problem* problem,
                                                        const int64_t* x, size_t n,
                                                        uint64_t seed, int64_t* out);

POSHRINK_API poshrink_status poshrink_risk_eval(const poshrink_prior* prior,
                                                const poshrink_problem* problem,
                                                const double* lambda,
                                                const poshrink_mc_options* options,
                                                poshrink_risk* out);

/* risk(power prior with the same beta) - risk(prior). */
POSHRINK_API poshrink_status poshrink_risk_reduction(const poshrink_prior* prior,
                                                     const poshrink_problem* problem,
                                                     const double* lambda,
                                                     const poshrink_mc_options* options,
                                                     poshrink_risk* out);

POSHRINK_API poshrink_status poshrink_bounds(const poshrink_problem* problem,
                                             double* lower, double* jeffreys_upper,
                                             double* ratio);

/* r_grid holds grid_count vectors of length d, row-major. */
POSHRINK_API poshrink_status poshrink_check_fineq(const poshrink_prior* prior,
                                                  const poshrink_problem* problem,
                                                  const double* r_grid, size_t grid_count,
                                                  int z_max, double tol_rel,
                                                  const poshrink_mc_options* options,
                                                  int* pass, char** json_out);

POSHRINK_API poshrink_status poshrink_check_nonconstant(const poshrink_prior* prior,
                                                        const poshrink_problem* problem,
                                                        const double* r, int z_max,
                                                        const poshrink_mc_options* options,
                                                        int* nonconstant);

POSHRINK_API poshrink_status poshrink_lemma_L(double lambda, int truncation, double* out);
POSHRINK_API poshrink_status poshrink_lemma_f(double lambda, double* out);

/* Runs experiment 1..4 on a Lambda grid; returns the plot CSV and the
 * sidecar JSON. */
POSHRINK_API poshrink_status poshrink_experiment(int id, const double* grid, size_t k,
                                                 const poshrink_mc_options* options,
                                                 char** csv_out, char** sidecar_out);

POSHRINK_API poshrink_status poshrink_eval_metrics(const poshrink_prior* prior,
                                                   const poshrink_problem* problem,
                                                   const int64_t* x, const int64_t* y,
                                                   const poshrink_mc_options* options,
                                                   poshrink_metrics* out);

POSHRINK_API poshrink_status poshrink_distance_metrics(const double* y_hat,
                                                       const int64_t* y, size_t d,
                                                       poshrink_metrics* out);

#ifdef __cplusplus
}
#endif

#endif /* POSHRINK_H */
