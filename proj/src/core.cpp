// SPDX-License-Identifier: Apache-2.0
#include "poshrink/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace poshrink {

namespace {

void check_durations(std::span<const double> r, std::span<const double> s) {
  if (r.size() != s.size()) {
    fail(ErrorCode::invalid_argument,
         "durations r and s have different lengths (" +
             std::to_string(r.size()) + " vs " + std::to_string(s.size()) +
             ")");
  }
  if (r.empty()) fail(ErrorCode::invalid_argument, "dimension d must be >= 1");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !std::isfinite(r[i])) {
      fail(ErrorCode::invalid_argument,
           "observation duration r[" + std::to_string(i) +
               "] must be positive and finite");
    }
    if (!(s[i] > 0.0) || !std::isfinite(s[i])) {
      fail(ErrorCode::invalid_argument,
           "prediction duration s[" + std::to_string(i) +
               "] must be positive and finite");
    }
  }
}

}  // namespace

ProblemSpec::ProblemSpec(std::vector<double> r, std::vector<double> s)
    : r_(std::move(r)), s_(std::move(s)) {
  check_durations(r_, s_);
}

ProblemSpec ProblemSpec::uniform(std::size_t d, double r, double s) {
  return ProblemSpec(std::vector<double>(d, r), std::vector<double>(d, s));
}

double ProblemSpec::gamma(std::size_t i) const {
  // s / (r (r + s)) avoids the cancellation in 1/r - 1/(r + s).
  return s_.at(i) / (r_.at(i) * (r_.at(i) + s_.at(i)));
}

std::vector<double> ProblemSpec::gamma() const { return derive_gamma(r_, s_); }

std::vector<double> ProblemSpec::total_durations() const {
  std::vector<double> out(r_.size());
  for (std::size_t i = 0; i < r_.size(); ++i) out[i] = r_[i] + s_[i];
  return out;
}

bool ProblemSpec::same_durations() const noexcept {
  return std::all_of(r_.begin(), r_.end(), [&](double v) { return v == r_[0]; }) &&
         std::all_of(s_.begin(), s_.end(), [&](double v) { return v == s_[0]; });
}

CountVector::CountVector(std::vector<Count> z) : z_(std::move(z)) {
  for (std::size_t i = 0; i < z_.size(); ++i) {
    if (z_[i] < 0) {
      fail(ErrorCode::invalid_argument,
           "count entry " + std::to_string(i) + " is negative");
    }
  }
}

Count CountVector::total() const noexcept {
  Count sum = 0;
  for (Count v : z_) sum += v;
  return sum;
}

CountVector CountVector::shifted(std::size_t i, Count delta) const {
  std::vector<Count> z = z_;
  z.at(i) += delta;
  return CountVector(std::move(z));
}

CountVector CountVector::operator+(const CountVector& other) const {
  if (other.size() != size()) {
    fail(ErrorCode::invalid_argument, "count vectors differ in length");
  }
  std::vector<Count> z(z_.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = z_[i] + other.z_[i];
  return CountVector(std::move(z));
}

ThetaPoint::ThetaPoint(std::vector<double> theta) : theta_(std::move(theta)) {
  for (std::size_t i = 0; i < theta_.size(); ++i) {
    if (!(theta_[i] >= 0.0)) {
      fail(ErrorCode::invalid_argument,
           "theta[" + std::to_string(i) + "] must be nonnegative");
    }
  }
}

std::vector<double> derive_gamma(std::span<const double> r,
                                 std::span<const double> s) {
  check_durations(r, s);
  std::vector<double> gamma(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    gamma[i] = s[i] / (r[i] * (r[i] + s[i]));
  }
  return gamma;
}

ThetaPoint theta_from_lambda(std::span<const double> lambda,
                             std::span<const double> gamma) {
  if (lambda.size() != gamma.size()) {
    fail(ErrorCode::invalid_argument, "lambda and gamma differ in length");
  }
  std::vector<double> theta(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!(lambda[i] >= 0.0)) {
      fail(ErrorCode::invalid_argument,
           "lambda[" + std::to_string(i) + "] must be nonnegative");
    }
    if (!(gamma[i] > 0.0)) {
      fail(ErrorCode::invalid_argument,
           "gamma[" + std::to_string(i) + "] must be positive");
    }
    theta[i] = std::sqrt(lambda[i] / gamma[i]);
  }
  return ThetaPoint(std::move(theta));
}

std::vector<double> lambda_from_theta(const ThetaPoint& theta,
                                      std::span<const double> gamma) {
  if (theta.size() != gamma.size()) {
    fail(ErrorCode::invalid_argument, "theta and gamma differ in length");
  }
  std::vector<double> lambda(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    lambda[i] = theta[i] * theta[i] * gamma[i];
  }
  return lambda;
}

double log_gamma_fn(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorCode::domain, "log-gamma requires a positive finite argument");
  }
  if (v < 0.5) return log_gamma_fn(v + 1.0) - std::log(v);

  static constexpr double g = 607.0 / 128.0;
  static constexpr std::array<double, 15> c = {
      0.99999999999999709182,     57.156235665862923517,
      -59.597960355475491248,     14.136097974741747174,
      -0.49191381609762019978,    .33994649984811888699e-4,
      .46523628927048575665e-4,   -.98374475304879564677e-4,
      .15808870322491248884e-3,   -.21026444172410488319e-3,
      .21743961811521264320e-3,   -.16431810653676389022e-3,
      .84418223983852743293e-4,   -.26190838401581408670e-4,
      .36899182659531622704e-5};

  const double x = v - 1.0;
  double a = c[0];
  for (std::size_t k = 1; k < c.size(); ++k) a += c[k] / (x + static_cast<double>(k));
  const double t = x + g + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t +
         std::log(a);
}

double log_sum_exp(std::span<const double> values) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - m);
  return m + std::log(sum);
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double poisson_log_pmf(Count k, double mean) {
  if (k < 0) return -std::numeric_limits<double>::infinity();
  if (mean == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  const double kd = static_cast<double>(k);
  return kd * std::log(mean) - mean - log_gamma_fn(kd + 1.0);
}

Count poisson_truncation(double mean) {
  return static_cast<Count>(std::ceil(mean + 12.0 * std::sqrt(mean) + 30.0));
}

// --- random streams --------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t state = a ^ (b * 0xd1b54a32d192ed03ULL);
  splitmix64(state);
  return splitmix64(state) ^ b;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = mix_seed(seed, stream);
  for (auto& word : s_) word = splitmix64(state);
}

std::uint64_t Rng::next() noexcept {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() noexcept {
  // 53 random bits, shifted by half an ulp so 0 is never returned.
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() noexcept {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::exponential() noexcept { return -std::log(uniform()); }

double Rng::gamma(double shape) noexcept {
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

Count Rng::poisson(double mean) noexcept {
  if (mean <= 0.0) return 0;
  if (mean <= 30.0) {
    const double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    Count k = 0;
    while (u > cdf && k < 1000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  // Hormann (1993) PTRS.
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<Count>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - log_gamma_fn(k + 1.0)) {
      return static_cast<Count>(k);
    }
  }
}

}  // namespace poshrink
