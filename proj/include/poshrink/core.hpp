// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

#include "poshrink/error.hpp"

namespace poshrink {

using Count = std::int64_t;

/// Observation and prediction durations for d independent Poisson processes.
///
/// Coordinate i is observed for duration r_i and predicted for duration s_i.
/// The rescaling weight gamma_i = 1/r_i - 1/(r_i + s_i) is always recomputed
/// from (r, s) and never stored on its own.
class ProblemSpec {
 public:
  ProblemSpec(std::vector<double> r, std::vector<double> s);

  /// d coordinates sharing the same pair of durations.
  static ProblemSpec uniform(std::size_t d, double r, double s);

  std::size_t dim() const noexcept { return r_.size(); }
  std::span<const double> r() const noexcept { return r_; }
  std::span<const double> s() const noexcept { return s_; }
  double r(std::size_t i) const { return r_.at(i); }
  double s(std::size_t i) const { return s_.at(i); }

  double gamma(std::size_t i) const;
  std::vector<double> gamma() const;

  /// r_i + s_i for every coordinate.
  std::vector<double> total_durations() const;

  bool same_durations() const noexcept;

 private:
  std::vector<double> r_;
  std::vector<double> s_;
};

/// Nonnegative integer vector (observations, targets or lattice points).
class CountVector {
 public:
  CountVector() = default;
  explicit CountVector(std::size_t d) : z_(d, 0) {}
  explicit CountVector(std::vector<Count> z);
  CountVector(std::initializer_list<Count> z)
      : CountVector(std::vector<Count>(z)) {}

  std::size_t size() const noexcept { return z_.size(); }
  Count operator[](std::size_t i) const { return z_[i]; }
  std::span<const Count> values() const noexcept { return z_; }
  auto begin() const noexcept { return z_.begin(); }
  auto end() const noexcept { return z_.end(); }

  Count total() const noexcept;

  /// Copy with z_i replaced by z_i + delta. Throws if the entry goes negative.
  CountVector shifted(std::size_t i, Count delta) const;

  CountVector operator+(const CountVector& other) const;

  auto operator<=>(const CountVector&) const = default;
  bool operator==(const CountVector&) const = default;

 private:
  std::vector<Count> z_;
};

/// Point in the nonnegative orthant of theta-space.
class ThetaPoint {
 public:
  explicit ThetaPoint(std::vector<double> theta);
  ThetaPoint(std::initializer_list<double> theta)
      : ThetaPoint(std::vector<double>(theta)) {}

  std::size_t size() const noexcept { return theta_.size(); }
  double operator[](std::size_t i) const { return theta_[i]; }
  std::span<const double> values() const noexcept { return theta_; }

 private:
  std::vector<double> theta_;
};

std::vector<double> derive_gamma(std::span<const double> r,
                                 std::span<const double> s);

ThetaPoint theta_from_lambda(std::span<const double> lambda,
                             std::span<const double> gamma);
std::vector<double> lambda_from_theta(const ThetaPoint& theta,
                                      std::span<const double> gamma);

/// Natural log of the gamma function for v > 0 (Lanczos, g = 607/128).
double log_gamma_fn(double v);

/// log(sum(exp(values))); -inf for an empty span or all -inf entries.
double log_sum_exp(std::span<const double> values);
double log_add_exp(double a, double b);

double poisson_log_pmf(Count k, double mean);

/// Upper truncation point for sums over a Poisson(mean) support:
/// mean + 12 sqrt(mean) + 30, which leaves tail mass below 1e-14.
Count poisson_truncation(double mean);

/// Seeded random stream (xoshiro256++). Streams are keyed by
/// (seed, stream index) so a task's draws never depend on which worker ran it.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() noexcept { return next(); }
  result_type next() noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double normal() noexcept;
  /// Gamma(shape, rate = 1) via Marsaglia-Tsang.
  double gamma(double shape) noexcept;
  double exponential() noexcept;
  /// Inversion for mean <= 30, PTRS transformed rejection above.
  Count poisson(double mean) noexcept;

 private:
  std::uint64_t s_[4];
};

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace poshrink
