// SPDX-License-Identifier: Apache-2.0
#include "poshrink/closed_form.hpp"

#include <cmath>
#include <string>

namespace poshrink {

void check_beta(std::span<const double> beta, std::size_t d) {
  if (beta.size() != d) {
    fail(ErrorCode::invalid_argument,
         "beta has length " + std::to_string(beta.size()) + ", expected " +
             std::to_string(d));
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!(beta[i] > 0.0) || !std::isfinite(beta[i])) {
      fail(ErrorCode::invalid_argument,
           "beta[" + std::to_string(i) + "] must be positive");
    }
  }
}

namespace {

void check_counts(const CountVector& z, std::size_t d, const char* name) {
  if (z.size() != d) {
    fail(ErrorCode::invalid_argument,
         std::string(name) + " has length " + std::to_string(z.size()) +
             ", expected " + std::to_string(d));
  }
}

void check_alpha(std::span<const double> alpha, std::size_t d) {
  if (alpha.size() != d) {
    fail(ErrorCode::invalid_argument, "gamma-prior alpha has wrong length");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!(alpha[i] >= 0.0) || !std::isfinite(alpha[i])) {
      fail(ErrorCode::invalid_argument,
           "gamma-prior alpha[" + std::to_string(i) + "] must be nonnegative");
    }
  }
}

double log_negbin_term(double x, double y, double beta, double rate_x,
                       double s, double rate_xy) {
  return (x + beta) * std::log(rate_x / rate_xy) + y * std::log(s / rate_xy) +
         log_gamma_fn(x + y + beta) - log_gamma_fn(x + beta) -
         log_gamma_fn(y + 1.0);
}

}  // namespace

double log_predictive_power(const CountVector& x, const CountVector& y,
                            std::span<const double> beta,
                            const ProblemSpec& spec) {
  const std::size_t d = spec.dim();
  check_counts(x, d, "x");
  check_counts(y, d, "y");
  check_beta(beta, d);
  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double r = spec.r(i);
    const double s = spec.s(i);
    total += log_negbin_term(static_cast<double>(x[i]), static_cast<double>(y[i]),
                             beta[i], r, s, r + s);
  }
  return total;
}

// Per-coordinate product form; each factor carries its own alpha_i.
double log_predictive_gamma(const CountVector& x, const CountVector& y,
                            std::span<const double> alpha,
                            std::span<const double> beta,
                            const ProblemSpec& spec) {
  const std::size_t d = spec.dim();
  check_counts(x, d, "x");
  check_counts(y, d, "y");
  check_beta(beta, d);
  check_alpha(alpha, d);
  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double r = spec.r(i);
    const double s = spec.s(i);
    total += log_negbin_term(static_cast<double>(x[i]), static_cast<double>(y[i]),
                             beta[i], r + alpha[i], s, r + s + alpha[i]);
  }
  return total;
}

std::vector<double> bayes_estimator_power(const CountVector& x,
                                          std::span<const double> beta,
                                          const ProblemSpec& spec) {
  const std::size_t d = spec.dim();
  check_counts(x, d, "x");
  check_beta(beta, d);
  std::vector<double> est(d);
  for (std::size_t i = 0; i < d; ++i) {
    est[i] = (static_cast<double>(x[i]) + beta[i]) / spec.r(i);
  }
  return est;
}

std::vector<CountVector> sample_predictive_gamma(const CountVector& x,
                                                 std::span<const double> alpha,
                                                 std::span<const double> beta,
                                                 const ProblemSpec& spec,
                                                 std::size_t n,
                                                 std::uint64_t seed) {
  const std::size_t d = spec.dim();
  check_counts(x, d, "x");
  check_beta(beta, d);
  check_alpha(alpha, d);
  if (n == 0) fail(ErrorCode::invalid_argument, "sample count must be >= 1");

  std::vector<CountVector> draws;
  draws.reserve(n);
  std::vector<Count> y(d);
  for (std::size_t k = 0; k < n; ++k) {
    Rng rng(seed, k);
    for (std::size_t i = 0; i < d; ++i) {
      const double lambda = rng.gamma(static_cast<double>(x[i]) + beta[i]) /
                            (spec.r(i) + alpha[i]);
      y[i] = rng.poisson(spec.s(i) * lambda);
    }
    draws.emplace_back(y);
  }
  return draws;
}

std::vector<CountVector> sample_predictive_power(const CountVector& x,
                                                 std::span<const double> beta,
                                                 const ProblemSpec& spec,
                                                 std::size_t n,
                                                 std::uint64_t seed) {
  const std::vector<double> zero(spec.dim(), 0.0);
  return sample_predictive_gamma(x, zero, beta, spec, n, seed);
}

}  // namespace poshrink
