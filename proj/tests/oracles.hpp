// SPDX-License-Identifier: Apache-2.0
// Independent reference computations for the tests. Nothing here calls the
// library: special functions come from <cmath>, integrals from plain
// trapezoid sums on wide grids.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline double log_poisson(long k, double mean) {
  if (mean == 0.0) return k == 0 ? 0.0 : -INFINITY;
  return static_cast<double>(k) * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0);
}

inline long upper_count(double mean) {
  return static_cast<long>(mean + 14.0 * std::sqrt(mean) + 40.0);
}

/// Negative binomial predictive of y given x under the power prior.
inline double log_nb_power(long x, long y, double beta, double r, double s) {
  const double k = static_cast<double>(x) + beta;
  return std::lgamma(k + static_cast<double>(y)) - std::lgamma(k) -
         std::lgamma(static_cast<double>(y) + 1.0) + k * std::log(r / (r + s)) +
         static_cast<double>(y) * std::log(s / (r + s));
}

/// Same under the gamma prior lambda^(beta-1) exp(-alpha lambda).
inline double log_nb_gamma(long x, long y, double alpha, double beta, double r, double s) {
  return log_nb_power(x, y, beta, r + alpha, s);
}

/// Direct double sum of the d = 1 K-L risk of the predictive q(x, y).
inline double risk_1d(const std::function<double(long, long)>& q, double lambda, double r,
                      double s) {
  const double mx = r * lambda, my = s * lambda;
  double total = 0.0;
  for (long x = 0; x <= upper_count(mx); ++x) {
    const double px = std::exp(log_poisson(x, mx));
    if (px < 1e-300) continue;
    double inner = 0.0;
    for (long y = 0; y <= upper_count(my); ++y) {
      const double lp = log_poisson(y, my);
      const double py = std::exp(lp);
      if (py < 1e-300) continue;
      inner += py * (lp - q(x, y));
    }
    total += px * inner;
  }
  return total;
}

/// log of sum over a grid of exp(values[k]) * step.
inline double log_trapezoid(const std::vector<double>& values, double step) {
  const double m = *std::max_element(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s * step);
}

/// log E[(sum theta_i^2 + eta)^(-alpha)] through
/// q^(-alpha) = Gamma(alpha)^(-1) * int u^(alpha-1) exp(-u q) du and the
/// gamma Laplace transform E[exp(-u theta^2)] = (1 + u / (gamma t))^(-k).
/// Coordinates with in_norm[i] == 0 do not enter the norm.
inline double log_F_shift_point(double alpha, double eta, const std::vector<long>& z,
                                const std::vector<double>& t, const std::vector<double>& gamma,
                                const std::vector<double>& beta,
                                const std::vector<int>& in_norm = {}) {
  const double step = 0.004;
  std::vector<double> values;
  for (double v = -80.0; v <= 80.0; v += step) {
    const double u = std::exp(v);
    double lv = alpha * v - u * eta;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (!in_norm.empty() && in_norm[i] == 0) continue;
      const double k = static_cast<double>(z[i]) + beta[i];
      lv -= k * std::log1p(u / (gamma[i] * t[i]));
    }
    values.push_back(lv);
  }
  return log_trapezoid(values, step) - std::lgamma(alpha);
}

/// Closed-form moment: all coordinates share gamma * t, eta = 0. The sum of
/// lambda_i is Gamma(sum k_i, t), so E[|theta|^(-2 alpha)] =
/// (gamma t)^alpha Gamma(K - alpha) / Gamma(K).
inline double log_F_moment(double alpha, double K, double gamma_t) {
  return alpha * std::log(gamma_t) + std::lgamma(K - alpha) - std::lgamma(K);
}

/// Density of theta = sqrt(lambda / gamma) when lambda ~ Gamma(k, rate t).
inline double theta_density(double th, double k, double t, double gamma) {
  const double lam = gamma * th * th;
  return std::exp(k * std::log(t) + (k - 1.0) * std::log(lam) - t * lam - std::lgamma(k)) *
         2.0 * gamma * th;
}

/// E[exp(-u (theta - c)^2)] by the midpoint rule on the window where the
/// Gaussian factor exceeds exp(-64), intersected with [0, th_max].
inline double gaussian_window_mean(double u, double c, double k, double t, double gamma,
                                   double th_max) {
  const double half = 8.0 / std::sqrt(u);
  const double lo = std::max(0.0, c - half);
  const double hi = std::min(th_max, c + half);
  if (hi <= lo) return 0.0;
  const int n = 4000;
  const double h = (hi - lo) / n;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double th = lo + h * (j + 0.5);
    const double a = th - c;
    sum += theta_density(th, k, t, gamma) * std::exp(-u * a * a);
  }
  return sum * h;
}

/// log E[sum over signs a of |a theta - c|^(-2 alpha)] (symmetric) or
/// log E[|theta - c|^(-2 alpha)] (plain), with the same Gamma-function
/// representation of the power and a per-coordinate theta quadrature.
inline double log_F_point(double alpha, const std::vector<double>& center,
                          const std::vector<long>& z, const std::vector<double>& t,
                          const std::vector<double>& gamma, const std::vector<double>& beta,
                          bool symmetric) {
  const std::size_t d = z.size();
  const double step = 0.05;
  std::vector<double> values;
  for (double v = -30.0; v <= 30.0; v += step) {
    const double u = std::exp(v);
    double lv = alpha * v;
    for (std::size_t i = 0; i < d; ++i) {
      const double k = static_cast<double>(z[i]) + beta[i];
      const double th_max = std::sqrt((k + 14.0 * std::sqrt(k) + 40.0) / t[i] / gamma[i]);
      double h = gaussian_window_mean(u, center[i], k, t[i], gamma[i], th_max);
      // The reflected term: sign flip of theta_i moves the centre to -c_i.
      if (symmetric) h += gaussian_window_mean(u, -center[i], k, t[i], gamma[i], th_max);
      lv += std::log(h);
    }
    values.push_back(lv);
  }
  return log_trapezoid(values, step) - std::lgamma(alpha);
}

}  // namespace oracle
