// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "poshrink/core.hpp"
#include "poshrink/f_integral.hpp"
#include "poshrink/theta_priors.hpp"

namespace poshrink {

// Predictive distributions for shrinkage priors, obtained from the power
// prior closed form by the ratio F(x + y, r + s) / F(x, r).

struct PredictiveValue {
  double value = 0.0;
  double std_error = 0.0;  // Monte Carlo error; 0 for exact evaluations
};

PredictiveValue log_predictive_f(const FEvaluator& F, const CountVector& x,
                                 const CountVector& y, const ProblemSpec& spec);

PredictiveValue log_predictive_f(const FPrior& prior, const CountVector& x,
                                 const CountVector& y, const ProblemSpec& spec,
                                 const MonteCarloSettings& settings = {});

/// lambda_hat_i = (x_i + beta_i) / r_i * F(x + delta_i, r) / F(x, r).
std::vector<double> bayes_estimator_f(const FEvaluator& F, const CountVector& x,
                                      const ProblemSpec& spec);

std::vector<double> bayes_estimator_f(const FPrior& prior, const CountVector& x,
                                      const ProblemSpec& spec,
                                      const MonteCarloSettings& settings = {});

/// y_hat_i = s_i * lambda_hat_i.
std::vector<double> predictive_mean_f(const FPrior& prior, const CountVector& x,
                                      const ProblemSpec& spec,
                                      const MonteCarloSettings& settings = {});

// Dispatch over every prior kind.

PredictiveValue log_predictive(const PriorSpec& prior, const CountVector& x,
                               const CountVector& y, const ProblemSpec& spec,
                               const MonteCarloSettings& settings = {});

std::vector<double> bayes_estimator(const PriorSpec& prior, const CountVector& x,
                                    const ProblemSpec& spec,
                                    const MonteCarloSettings& settings = {});

std::vector<double> predictive_mean(const PriorSpec& prior, const CountVector& x,
                                    const ProblemSpec& spec,
                                    const MonteCarloSettings& settings = {});

}  // namespace poshrink
