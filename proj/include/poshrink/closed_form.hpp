// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "poshrink/core.hpp"

namespace poshrink {

// Exact predictive distributions for the power prior prod lambda_i^(beta_i-1)
// (beta = 1/2 is Jeffreys) and for gamma priors
// prod lambda_i^(beta_i-1) exp(-alpha_i lambda_i). Both factor over
// coordinates into negative binomial laws and are evaluated in log space.

double log_predictive_power(const CountVector& x, const CountVector& y,
                            std::span<const double> beta,
                            const ProblemSpec& spec);

double log_predictive_gamma(const CountVector& x, const CountVector& y,
                            std::span<const double> alpha,
                            std::span<const double> beta,
                            const ProblemSpec& spec);

/// Posterior mean (x_i + beta_i) / r_i under the power prior.
std::vector<double> bayes_estimator_power(const CountVector& x,
                                          std::span<const double> beta,
                                          const ProblemSpec& spec);

/// Draws y from the power-prior predictive through its gamma-Poisson mixture:
/// lambda_i ~ Gamma(x_i + beta_i, rate r_i), y_i ~ Poisson(s_i lambda_i).
/// Draw k uses stream (seed, k), so output is independent of threading.
std::vector<CountVector> sample_predictive_power(const CountVector& x,
                                                 std::span<const double> beta,
                                                 const ProblemSpec& spec,
                                                 std::size_t n,
                                                 std::uint64_t seed);

/// Same mixture with rate r_i + alpha_i (gamma prior).
std::vector<CountVector> sample_predictive_gamma(const CountVector& x,
                                                 std::span<const double> alpha,
                                                 std::span<const double> beta,
                                                 const ProblemSpec& spec,
                                                 std::size_t n,
                                                 std::uint64_t seed);

/// Validates a per-coordinate beta vector (length d, entries > 0).
void check_beta(std::span<const double> beta, std::size_t d);

}  // namespace poshrink
