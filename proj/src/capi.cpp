// SPDX-License-Identifier: Apache-2.0
#include "poshrink.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "poshrink/closed_form.hpp"
#include "poshrink/conditions.hpp"
#include "poshrink/experiments.hpp"
#include "poshrink/f_integral.hpp"
#include "poshrink/parallel.hpp"
#include "poshrink/predictive.hpp"
#include "poshrink/prior_grammar.hpp"
#include "poshrink/risk.hpp"

struct poshrink_problem {
  poshrink::ProblemSpec spec;
};

struct poshrink_prior {
  poshrink::PriorSpec prior;
};

namespace {

using namespace poshrink;

thread_local std::string last_error;

poshrink_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
      return POSHRINK_E_INVALID_ARGUMENT;
    case ErrorCode::parse:
      return POSHRINK_E_PARSE;
    case ErrorCode::unsupported_dimension:
      return POSHRINK_E_UNSUPPORTED_DIMENSION;
    case ErrorCode::cost:
      return POSHRINK_E_COST;
    case ErrorCode::domain:
      return POSHRINK_E_DOMAIN;
    case ErrorCode::integrability:
      return POSHRINK_E_INTEGRABILITY;
    case ErrorCode::singularity:
      return POSHRINK_E_SINGULARITY;
    case ErrorCode::io:
      return POSHRINK_E_IO;
  }
  return POSHRINK_E_INTERNAL;
}

template <class Body>
poshrink_status guard(Body&& body) {
  try {
    body();
    last_error.clear();
    return POSHRINK_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return POSHRINK_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return POSHRINK_E_INTERNAL;
  }
}

void require(const void* ptr, const char* name) {
  if (ptr == nullptr) fail(ErrorCode::invalid_argument, std::string(name) + " is null");
}

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

CountVector counts(const int64_t* values, std::size_t d) {
  require(values, "count vector");
  return CountVector(std::vector<Count>(values, values + d));
}

std::vector<double> reals(const double* values, std::size_t d, const char* name) {
  require(values, name);
  return std::vector<double>(values, values + d);
}

MonteCarloSettings inner_settings(const poshrink_mc_options* options) {
  poshrink_mc_options defaults;
  poshrink_mc_options_default(&defaults);
  const poshrink_mc_options& o = options ? *options : defaults;
  MonteCarloSettings mc;
  mc.n = o.inner_n;
  mc.seed = o.seed;
  mc.singular_eps = o.singular_eps;
  mc.blocks = o.blocks;
  return mc;
}

ReductionOptions reduction_options(const poshrink_mc_options* options) {
  poshrink_mc_options defaults;
  poshrink_mc_options_default(&defaults);
  const poshrink_mc_options& o = options ? *options : defaults;
  ReductionOptions out;
  out.n = o.outer_n;
  out.seed = o.seed;
  out.inner = inner_settings(&o);
  if (o.use_cache) out.cache = std::make_shared<FCache>();
  return out;
}

const FPrior& shrinkage(const poshrink_prior* prior) {
  require(prior, "prior");
  const auto* f = std::get_if<FPrior>(&prior->prior);
  if (f == nullptr) {
    fail(ErrorCode::invalid_argument, "operation needs a shrinkage (f-based) prior");
  }
  return *f;
}

void check_same_dim(const poshrink_prior* prior, const poshrink_problem* problem) {
  require(prior, "prior");
  require(problem, "problem");
  if (prior_dim(prior->prior) != problem->spec.dim()) {
    fail(ErrorCode::invalid_argument, "prior and problem dimensions differ");
  }
}

void fill_risk(const RiskEstimate& est, poshrink_risk* out) {
  out->value = est.value;
  out->std_error = est.std_error;
  out->method = static_cast<poshrink_risk_method>(est.method);
  out->outer_n = est.settings.n;
  out->inner_n = est.settings.inner_n;
  out->seed = est.settings.seed;
  out->infinite = est.infinite ? 1 : 0;
}

void fill_metrics(const Metrics& m, poshrink_metrics* out) {
  out->kl_dist = m.kl_dist;
  out->ws_dist = m.ws_dist;
  out->loglik = m.loglik;
  out->loglik_se = m.loglik_se;
  out->kl_infinite = m.kl_infinite ? 1 : 0;
}

}  // namespace

extern "C" {

const char* poshrink_version(void) { return "0.1.0"; }

const char* poshrink_last_error(void) { return last_error.c_str(); }

const char* poshrink_status_name(poshrink_status status) {
  switch (status) {
    case POSHRINK_OK:
      return "ok";
    case POSHRINK_E_INVALID_ARGUMENT:
      return "invalid-argument";
    case POSHRINK_E_PARSE:
      return "parse";
    case POSHRINK_E_UNSUPPORTED_DIMENSION:
      return "unsupported-dimension";
    case POSHRINK_E_COST:
      return "cost";
    case POSHRINK_E_DOMAIN:
      return "domain";
    case POSHRINK_E_INTEGRABILITY:
      return "integrability";
    case POSHRINK_E_SINGULARITY:
      return "singularity";
    case POSHRINK_E_IO:
      return "io";
    case POSHRINK_E_INTERNAL:
      return "internal";
  }
  return "unknown";
}

void poshrink_string_free(char* text) { std::free(text); }

void poshrink_set_threads(size_t threads) { set_thread_count(threads); }

void poshrink_mc_options_default(poshrink_mc_options* options) {
  if (options == nullptr) return;
  options->outer_n = 200000;
  options->inner_n = 100000;
  options->seed = 20240601;
  options->singular_eps = 1e-6;
  options->blocks = 10;
  options->use_cache = 1;
}

poshrink_status poshrink_problem_create(const double* r, const double* s, size_t d,
                                        poshrink_problem** out) {
  return guard([&] {
    require(out, "out");
    *out = nullptr;
    *out = new poshrink_problem{ProblemSpec(reals(r, d, "r"), reals(s, d, "s"))};
  });
}

void poshrink_problem_free(poshrink_problem* problem) { delete problem; }

size_t poshrink_problem_dim(const poshrink_problem* problem) {
  return problem ? problem->spec.dim() : 0;
}

poshrink_status poshrink_problem_gamma(const poshrink_problem* problem, double* gamma_out) {
  return guard([&] {
    require(problem, "problem");
    require(gamma_out, "gamma_out");
    const auto g = problem->spec.gamma();
    std::copy(g.begin(), g.end(), gamma_out);
  });
}

poshrink_status poshrink_prior_parse(const char* text, size_t d, int check_hypotheses,
                                     poshrink_prior** out) {
  return guard([&] {
    require(text, "text");
    require(out, "out");
    *out = nullptr;
    *out = new poshrink_prior{parse_prior(text, d, check_hypotheses != 0)};
  });
}

void poshrink_prior_free(poshrink_prior* prior) { delete prior; }

size_t poshrink_prior_dim(const poshrink_prior* prior) {
  return prior ? prior_dim(prior->prior) : 0;
}

int poshrink_prior_is_shrinkage(const poshrink_prior* prior) {
  return prior != nullptr && std::holds_alternative<FPrior>(prior->prior) ? 1 : 0;
}

poshrink_status poshrink_prior_describe(const poshrink_prior* prior, char** out) {
  return guard([&] {
    require(prior, "prior");
    require(out, "out");
    *out = copy_string(describe(prior->prior));
  });
}

poshrink_status poshrink_prior_certify(const poshrink_prior* prior, char** json_out) {
  return guard([&] {
    require(json_out, "json_out");
    *json_out = copy_string(certify_builtin(shrinkage(prior)).to_json());
  });
}

poshrink_status poshrink_log_F(const poshrink_prior* prior, const poshrink_problem* problem,
                               const int64_t* z, const double* t,
                               const poshrink_mc_options* options, double* log_value,
                               double* std_error, poshrink_backend* backend) {
  return guard([&] {
    check_same_dim(prior, problem);
    require(log_value, "log_value");
    const std::size_t d = problem->spec.dim();
    const FEvaluator F(shrinkage(prior), problem->spec.gamma(), inner_settings(options));
    const FEstimate est = F(counts(z, d), reals(t, d, "t"));
    *log_value = est.log_value;
    if (std_error) *std_error = est.std_error;
    if (backend) {
      *backend = est.backend == FBackend::quadrature ? POSHRINK_QUADRATURE
                                                     : POSHRINK_MONTE_CARLO_F;
    }
  });
}

poshrink_status poshrink_log_predictive(const poshrink_prior* prior,
                                        const poshrink_problem* problem, const int64_t* x,
                                        const int64_t* y, const poshrink_mc_options* options,
                                        double* value, double* std_error) {
  return guard([&] {
    check_same_dim(prior, problem);
    require(value, "value");
    const std::size_t d = problem->spec.dim();
    const PredictiveValue v = log_predictive(prior->prior, counts(x, d), counts(y, d),
                                             problem->spec, inner_settings(options));
    *value = v.value;
    if (std_error) *std_error = v.std_error;
  });
}

poshrink_status poshrink_predictive_mean(const poshrink_prior* prior,
                                         const poshrink_problem* problem, const int64_t* x,
                                         const poshrink_mc_options* options,
                                         double* mean_out) {
  return guard([&] {
    check_same_dim(prior, problem);
    require(mean_out, "mean_out");
    const auto mean = predictive_mean(prior->prior, counts(x, problem->spec.dim()),
                                      problem->spec, inner_settings(options));
    std::copy(mean.begin(), mean.end(), mean_out);
  });
}

poshrink_status poshrink_sample_predictive(const poshrink_prior* prior,
                                           const poshrink_problem* problem,
                                           const int64_t* x, size_t n, uint64_t seed,
                                           int64_t* out) {
  return guard([&] {
    check_same_dim(prior, problem);
    require(out, "out");
    const std::size_t d = problem->spec.dim();
    const CountVector xv = counts(x, d);
    std::vector<CountVector> draws;
    if (const auto* p = std::get_if<PowerPrior>(&prior->prior)) {
      draws = sample_predictive_power(xv, p->beta, problem->spec, n, seed);
    } else if (const auto* g = std::get_if<GammaPrior>(&prior->prior)) {
      draws = sample_predictive_gamma(xv, g->alpha, g->beta, problem->spec, n, seed);
    } else {
      fail(ErrorCode::invalid_argument,
           "predictive sampling is available for power and gamma priors only");
    }
    for (std::size_t k = 0; k < draws.size(); ++k) {
      std::copy(draws[k].begin(), draws[k].end(), out + k * d);
    }
  });
}

poshrink_status poshrink_risk_eval(const poshrink_prior* prior, const poshrink_problem* problem,
                                   const double* lambda, const poshrink_mc_options* options,
                                   poshrink_risk* out) {
  return guard([&] {
    check_same_dim(prior, problem);
    require(out, "out");
    const auto l = reals(lambda, problem->spec.dim(), "lambda");
    fill_risk(kl_risk(prior->prior, l, problem->spec, reduction_options(options)), out);
  });
}

poshrink_status poshrink_risk_reduction(const poshrink_prior* prior,
                                        const poshrink_problem* problem,
                                        const double* lambda,
                                        const poshrink_mc_options* options,
                                        poshrink_risk* out) {
  return guard([&] {
    check_same_dim(prior, problem);
    require(out, "out");
    const auto l = reals(lambda, problem->spec.dim(), "lambda");
    RiskEstimate est;
    if (const auto* g = std::get_if<GammaPrior>(&prior->prior)) {
      est.value = -gamma_risk_gap(l, g->alpha, g->beta, problem->spec);
    } else if (std::holds_alternative<FPrior>(prior->prior)) {
      est = risk_reduction_f(shrinkage(prior), l, problem->spec, reduction_options(options));
    }
    fill_risk(est, out);
  });
}

poshrink_status poshrink_bounds(const poshrink_problem* problem, double* lower,
                                double* jeffreys_upper, double* ratio) {
  return guard([&] {
    require(problem, "problem");
    const MinimaxBounds b = minimax_bounds(problem->spec);
    if (lower) *lower = b.lower;
    if (jeffreys_upper) *jeffreys_upper = b.jeffreys_upper;
    if (ratio) *ratio = b.ratio;
  });
}

poshrink_status poshrink_check_fineq(const poshrink_prior* prior,
                                     const poshrink_problem* problem, const double* r_grid,
                                     size_t grid_count, int z_max, double tol_rel,
                                     const poshrink_mc_options* options, int* pass,
                                     char** json_out) {
  return guard([&] {
    check_same_dim(prior, problem);
    const std::size_t d = problem->spec.dim();
    require(r_grid, "r_grid");
    std::vector<std::vector<double>> grid;
    for (std::size_t g = 0; g < grid_count; ++g) {
      grid.emplace_back(r_grid + g * d, r_grid + (g + 1) * d);
    }
    FineqOptions fo;
    fo.tol_rel = tol_rel;
    const MonteCarloSettings mc = inner_settings(options);
    fo.n = mc.n;
    fo.seed = mc.seed;
    fo.singular_eps = mc.singular_eps;
    const FineqReport report = check_fineq(shrinkage(prior), problem->spec, grid, z_max, fo);
    if (pass) *pass = report.pass ? 1 : 0;
    if (json_out) *json_out = copy_string(report.to_json());
  });
}

poshrink_status poshrink_check_nonconstant(const poshrink_prior* prior,
                                           const poshrink_problem* problem, const double* r,
                                           int z_max, const poshrink_mc_options* options,
                                           int* nonconstant) {
  return guard([&] {
    check_same_dim(prior, problem);
    require(nonconstant, "nonconstant");
    const auto rv = reals(r, problem->spec.dim(), "r");
    *nonconstant = check_nonconstant_F(shrinkage(prior), problem->spec, rv, z_max,
                                       inner_settings(options))
                       ? 1
                       : 0;
  });
}

poshrink_status poshrink_lemma_L(double lambda, int truncation, double* out) {
  return guard([&] {
    require(out, "out");
    *out = lemma_L(lambda, truncation);
  });
}

poshrink_status poshrink_lemma_f(double lambda, double* out) {
  return guard([&] {
    require(out, "out");
    *out = lemma_f(lambda);
  });
}

poshrink_status poshrink_experiment(int id, const double* grid, size_t k,
                                    const poshrink_mc_options* options, char** csv_out,
                                    char** sidecar_out) {
  return guard([&] {
    const std::vector<double> g =
        k == 0 ? default_lambda_grid() : reals(grid, k, "grid");
    const ExperimentTable table = run_experiment(id, g, reduction_options(options));
    if (csv_out) *csv_out = copy_string(plot_data_csv(table));
    if (sidecar_out) *sidecar_out = copy_string(experiment_sidecar_json(table));
  });
}

poshrink_status poshrink_eval_metrics(const poshrink_prior* prior,
                                      const poshrink_problem* problem, const int64_t* x,
                                      const int64_t* y, const poshrink_mc_options* options,
                                      poshrink_metrics* out) {
  return guard([&] {
    check_same_dim(prior, problem);
    require(out, "out");
    const std::size_t d = problem->spec.dim();
    fill_metrics(eval_metrics(counts(x, d), counts(y, d), prior->prior, problem->spec,
                              inner_settings(options)),
                 out);
  });
}

poshrink_status poshrink_distance_metrics(const double* y_hat, const int64_t* y, size_t d,
                                          poshrink_metrics* out) {
  return guard([&] {
    require(out, "out");
    fill_metrics(distance_metrics(reals(y_hat, d, "y_hat"), counts(y, d)), out);
  });
}

}  // extern "C"
