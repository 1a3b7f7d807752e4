// SPDX-License-Identifier: Apache-2.0
#include "poshrink/predictive.hpp"

#include <cmath>
#include <string>

#include "poshrink/closed_form.hpp"

namespace poshrink {

namespace {

void check_dim(const FPrior& prior, const ProblemSpec& spec) {
  if (prior.dim() != spec.dim()) {
    fail(ErrorCode::invalid_argument,
         "prior has d = " + std::to_string(prior.dim()) + ", problem has d = " +
             std::to_string(spec.dim()));
  }
}

}  // namespace

PredictiveValue log_predictive_f(const FEvaluator& F, const CountVector& x,
                                 const CountVector& y, const ProblemSpec& spec) {
  check_dim(F.prior(), spec);
  const double base = log_predictive_power(x, y, F.prior().beta(), spec);
  const auto total = spec.total_durations();
  const FEstimate num = F(x + y, total);
  const FEstimate den = F(x, spec.r());
  return {base + num.log_value - den.log_value, std::hypot(num.std_error, den.std_error)};
}

PredictiveValue log_predictive_f(const FPrior& prior, const CountVector& x,
                                 const CountVector& y, const ProblemSpec& spec,
                                 const MonteCarloSettings& settings) {
  return log_predictive_f(FEvaluator(prior, spec.gamma(), settings), x, y, spec);
}

std::vector<double> bayes_estimator_f(const FEvaluator& F, const CountVector& x,
                                      const ProblemSpec& spec) {
  check_dim(F.prior(), spec);
  std::vector<double> est = bayes_estimator_power(x, F.prior().beta(), spec);
  for (std::size_t i = 0; i < est.size(); ++i) {
    est[i] *= std::exp(F.shift_ratio(x, i, spec.r()).value);
  }
  return est;
}

std::vector<double> bayes_estimator_f(const FPrior& prior, const CountVector& x,
                                      const ProblemSpec& spec,
                                      const MonteCarloSettings& settings) {
  return bayes_estimator_f(FEvaluator(prior, spec.gamma(), settings), x, spec);
}

std::vector<double> predictive_mean_f(const FPrior& prior, const CountVector& x,
                                      const ProblemSpec& spec,
                                      const MonteCarloSettings& settings) {
  std::vector<double> mean = bayes_estimator_f(prior, x, spec, settings);
  for (std::size_t i = 0; i < mean.size(); ++i) mean[i] *= spec.s(i);
  return mean;
}

PredictiveValue log_predictive(const PriorSpec& prior, const CountVector& x,
                               const CountVector& y, const ProblemSpec& spec,
                               const MonteCarloSettings& settings) {
  if (const auto* p = std::get_if<PowerPrior>(&prior)) {
    return {log_predictive_power(x, y, p->beta, spec), 0.0};
  }
  if (const auto* g = std::get_if<GammaPrior>(&prior)) {
    return {log_predictive_gamma(x, y, g->alpha, g->beta, spec), 0.0};
  }
  return log_predictive_f(std::get<FPrior>(prior), x, y, spec, settings);
}

std::vector<double> bayes_estimator(const PriorSpec& prior, const CountVector& x,
                                    const ProblemSpec& spec,
                                    const MonteCarloSettings& settings) {
  if (const auto* p = std::get_if<PowerPrior>(&prior)) {
    return bayes_estimator_power(x, p->beta, spec);
  }
  if (const auto* g = std::get_if<GammaPrior>(&prior)) {
    check_beta(g->beta, spec.dim());
    if (x.size() != spec.dim() || g->alpha.size() != spec.dim()) {
      fail(ErrorCode::invalid_argument, "gamma prior and x must have length d");
    }
    std::vector<double> est(spec.dim());
    for (std::size_t i = 0; i < est.size(); ++i) {
      est[i] = (static_cast<double>(x[i]) + g->beta[i]) / (spec.r(i) + g->alpha[i]);
    }
    return est;
  }
  return bayes_estimator_f(std::get<FPrior>(prior), x, spec, settings);
}

std::vector<double> predictive_mean(const PriorSpec& prior, const CountVector& x,
                                    const ProblemSpec& spec,
                                    const MonteCarloSettings& settings) {
  std::vector<double> mean = bayes_estimator(prior, x, spec, settings);
  for (std::size_t i = 0; i < mean.size(); ++i) mean[i] *= spec.s(i);
  return mean;
}

}  // namespace poshrink
