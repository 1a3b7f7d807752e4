// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "poshrink/core.hpp"
#include "poshrink/theta_priors.hpp"

namespace poshrink {

// F(z, t) = E[f(theta)] where theta_i = sqrt(lambda_i / gamma_i) and
// lambda_i ~ Gamma(shape z_i + beta_i, rate t_i) independently.

enum class FBackend { quadrature, monte_carlo };

const char* backend_name(FBackend backend) noexcept;

struct FEstimate {
  double log_value = 0.0;
  double std_error = 0.0;  // standard error of log_value; 0 for quadrature
  FBackend backend = FBackend::quadrature;
  std::size_t n_samples = 0;
  CountVector z;
  std::vector<double> t;
};

struct MonteCarloSettings {
  std::size_t n = 100000;
  std::uint64_t seed = 20240601;
  /// Smoothing used for sym-subspace families whose eps is 0.
  double singular_eps = 1e-6;
  /// Median-of-means block count for smoothed singular families.
  std::size_t blocks = 10;
};

/// True when every part of the family reduces to
/// c * (sum_{i in S} theta_i^2 + eta)^(-alpha), the one-dimensional case.
bool quadrature_supported(const FPrior& prior);

FEstimate F_quadrature(const FPrior& prior, const CountVector& z,
                       std::span<const double> t, std::span<const double> gamma);

FEstimate F_monte_carlo(const FPrior& prior, const CountVector& z,
                        std::span<const double> t, std::span<const double> gamma,
                        const MonteCarloSettings& settings = {});

/// Monte Carlo mean of exp(log_f(theta)) for an arbitrary log shrinkage factor.
FEstimate F_monte_carlo(const std::function<double(std::span<const double>)>& log_f,
                        std::span<const double> beta, const CountVector& z,
                        std::span<const double> t, std::span<const double> gamma,
                        const MonteCarloSettings& settings = {});

/// Routes each part of a sum to quadrature when possible, Monte Carlo
/// otherwise, and adds the parts.
FEstimate evaluate_F(const FPrior& prior, const CountVector& z,
                     std::span<const double> t, std::span<const double> gamma,
                     const MonteCarloSettings& settings = {});

/// The prior the Monte Carlo backend actually integrates: sym-subspace
/// families with eps = 0 pick up settings.singular_eps.
FPrior monte_carlo_prior(const FPrior& prior, const MonteCarloSettings& settings);

struct LogRatio {
  double value = 0.0;
  double std_error = 0.0;
};

/// log F(z_num, t_num) - log F(z_den, t_den). The Monte Carlo path draws both
/// gamma vectors from one stream: the smaller shape is drawn once and the
/// integer shape difference is added as a sum of exponentials.
LogRatio log_F_ratio(const FPrior& prior, const CountVector& z_num,
                     std::span<const double> t_num, const CountVector& z_den,
                     std::span<const double> t_den, std::span<const double> gamma,
                     const MonteCarloSettings& settings = {});

struct SmoothingSensitivity {
  double log_F_default = 0.0;  // eps = 1e-6
  double log_F_rerun = 0.0;    // eps = 1e-4
  double difference = 0.0;
  double std_error = 0.0;
};

SmoothingSensitivity smoothing_sensitivity(const FPrior& prior,
                                           const CountVector& z,
                                           std::span<const double> t,
                                           std::span<const double> gamma,
                                           const MonteCarloSettings& settings = {});

/// Rounds to 12 significant digits (cache key equivalence for t).
double quantize_rate(double t);

std::uint64_t hash_lattice_point(const CountVector& z, std::span<const double> t);

/// Bounded LRU memo of F evaluations, safe for concurrent use.
class FCache {
 public:
  explicit FCache(std::size_t capacity = 1000000);

  struct Key {
    std::uint64_t prior = 0;
    std::uint64_t settings = 0;
    std::vector<Count> z;
    std::vector<double> t;  // quantized
    bool operator==(const Key&) const = default;
  };

  bool lookup(const Key& key, FEstimate& out);
  void insert(const Key& key, const FEstimate& value);

  void set_enabled(bool enabled);
  bool enabled() const;
  void clear();

  std::size_t size() const;
  std::size_t hits() const;
  std::size_t misses() const;
  double hit_rate() const;

 private:
  struct KeyHash {
    std::size_t operator()(const Key& key) const noexcept;
  };
  using Entry = std::pair<Key, FEstimate>;

  std::size_t capacity_;
  bool enabled_ = true;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
  std::list<Entry> order_;
  std::unordered_map<Key, std::list<Entry>::iterator, KeyHash> index_;
  mutable std::mutex mutex_;
};

/// F for one prior and one duration setting. The Monte Carlo seed for a
/// lattice point is derived from (settings.seed, z, t) so results do not
/// depend on evaluation order or on whether the cache was hit.
class FEvaluator {
 public:
  FEvaluator(FPrior prior, std::vector<double> gamma,
             MonteCarloSettings settings = {},
             std::shared_ptr<FCache> cache = nullptr);

  FEstimate operator()(const CountVector& z, std::span<const double> t) const;

  /// log F(z + delta_i, t) - log F(z, t) with common random numbers.
  LogRatio shift_ratio(const CountVector& z, std::size_t i,
                       std::span<const double> t) const;

  const FPrior& prior() const noexcept { return prior_; }
  std::span<const double> gamma() const noexcept { return gamma_; }
  const MonteCarloSettings& settings() const noexcept { return settings_; }
  bool exact() const noexcept { return exact_; }
  const std::shared_ptr<FCache>& cache() const noexcept { return cache_; }

 private:
  FPrior prior_;
  std::vector<double> gamma_;
  MonteCarloSettings settings_;
  std::shared_ptr<FCache> cache_;
  bool exact_;
  std::uint64_t settings_key_;
};

}  // namespace poshrink
