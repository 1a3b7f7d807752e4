// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "poshrink/core.hpp"
#include "poshrink/f_integral.hpp"
#include "poshrink/theta_priors.hpp"

namespace poshrink {

// Kullback-Leibler risks in nats.

enum class RiskMethod { exact_sum, monte_carlo, hybrid };

const char* method_name(RiskMethod method) noexcept;

struct RiskSettings {
  std::size_t n = 0;        // outer Monte Carlo draws; 0 for exact sums
  std::size_t inner_n = 0;  // samples per Monte Carlo F evaluation
  std::uint64_t seed = 0;
  std::string truncation = "poisson sums to mean + 12 sqrt(mean) + 30";
};

struct RiskEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 iff method == exact_sum
  RiskMethod method = RiskMethod::exact_sum;
  RiskSettings settings;
  bool infinite = false;
};

struct ReductionOptions {
  std::size_t n = 200000;
  std::uint64_t seed = 20240601;
  MonteCarloSettings inner;
  std::shared_ptr<FCache> cache;
};

/// Exact risk of the power-prior predictive, coordinate by coordinate.
RiskEstimate kl_risk_power(std::span<const double> lambda,
                           std::span<const double> beta, const ProblemSpec& spec);

/// Exact risk of the gamma-prior predictive.
RiskEstimate kl_risk_gamma(std::span<const double> lambda,
                           std::span<const double> alpha,
                           std::span<const double> beta, const ProblemSpec& spec);

/// risk(gamma prior) - risk(power prior) in closed form.
double gamma_risk_gap(std::span<const double> lambda, std::span<const double> alpha,
                      std::span<const double> beta, const ProblemSpec& spec);

/// risk(p_beta) - risk(p_f) = E log F(x + y, r + s) - E log F(x, r), with
/// x ~ Po(r lambda) and y ~ Po(s lambda) drawn jointly so both terms share
/// the draw. Distinct lattice points are evaluated once, in parallel.
RiskEstimate risk_reduction_f(const FPrior& prior, std::span<const double> lambda,
                              const ProblemSpec& spec,
                              const ReductionOptions& options = {});

/// kl_risk_power(beta of the prior) - risk_reduction_f.
RiskEstimate kl_risk_f(const FPrior& prior, std::span<const double> lambda,
                       const ProblemSpec& spec, const ReductionOptions& options = {});

RiskEstimate kl_risk(const PriorSpec& prior, std::span<const double> lambda,
                     const ProblemSpec& spec, const ReductionOptions& options = {});

struct MinimaxBounds {
  double lower = 0.0;           // 0.5 sum log((r_i + s_i) / r_i)
  double jeffreys_upper = 0.0;  // 0.52 sum log((r_i + s_i) / r_i)
  double ratio = 0.0;
};

MinimaxBounds minimax_bounds(const ProblemSpec& spec);

using EstimatorRule = std::function<std::vector<double>(const CountVector&)>;

/// Plug-in risk sum_x P(x) sum_i [r_i lambda_i log(lambda_i / hat_i) -
/// r_i lambda_i + r_i hat_i], summed exactly over the lattice with joint
/// probabilities below `prune` skipped. A zero estimate for a positive
/// lambda yields an infinite result.
RiskEstimate estimator_kl_risk(const EstimatorRule& rule,
                               std::span<const double> lambda,
                               const ProblemSpec& spec, double prune = 1e-20);

/// sum_{x=0}^{truncation} log(x + 0.5) Po(x; lambda) lambda - lambda log lambda.
double lemma_L(double lambda, int truncation = 20);

/// lambda E[log((x + 0.5) / lambda)], x ~ Po(lambda), summed over the full
/// support up to negligible tail mass.
double lemma_f(double lambda);

using PredictiveLogPmf = std::function<double(Count x, Count y)>;

/// Direct double sum of the risk of q at d = 1.
double brute_force_risk_1d(const PredictiveLogPmf& q, std::span<const double> lambda,
                           const ProblemSpec& spec);

}  // namespace poshrink
