// SPDX-License-Identifier: Apache-2.0
#include "poshrink/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "poshrink/closed_form.hpp"
#include "poshrink/parallel.hpp"

namespace poshrink {

namespace {

void check_lambda(std::span<const double> lambda, const ProblemSpec& spec) {
  if (lambda.size() != spec.dim()) {
    fail(ErrorCode::invalid_argument,
         "lambda has length " + std::to_string(lambda.size()) + ", expected " +
             std::to_string(spec.dim()));
  }
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!(lambda[i] > 0.0) || !std::isfinite(lambda[i])) {
      fail(ErrorCode::invalid_argument,
           "lambda[" + std::to_string(i) + "] must be positive");
    }
  }
}

Count lower_truncation(double mean) {
  const double lo = std::floor(mean - 12.0 * std::sqrt(mean) - 30.0);
  return lo > 0.0 ? static_cast<Count>(lo) : 0;
}

// E[g(K)] for K ~ Poisson(mean), summed over the truncated support.
template <class G>
double poisson_expectation(double mean, G&& g) {
  long double total = 0.0L;
  for (Count k = lower_truncation(mean); k <= poisson_truncation(mean); ++k) {
    total += std::exp(poisson_log_pmf(k, mean)) * static_cast<long double>(g(k));
  }
  return static_cast<double>(total);
}

double expected_log_gamma(double mean, double shift) {
  return poisson_expectation(mean, [shift](Count k) {
    return log_gamma_fn(static_cast<double>(k) + shift);
  });
}

bool is_constant(const FPrior& prior) {
  return std::holds_alternative<ConstantFamily>(prior.family().kind);
}

}  // namespace

const char* method_name(RiskMethod method) noexcept {
  switch (method) {
    case RiskMethod::exact_sum:
      return "exact-sum";
    case RiskMethod::monte_carlo:
      return "monte-carlo";
    case RiskMethod::hybrid:
      return "hybrid";
  }
  return "unknown";
}

RiskEstimate kl_risk_power(std::span<const double> lambda,
                           std::span<const double> beta, const ProblemSpec& spec) {
  check_lambda(lambda, spec);
  check_beta(beta, spec.dim());
  RiskEstimate out;
  for (std::size_t i = 0; i < spec.dim(); ++i) {
    const double r = spec.r(i), s = spec.s(i), l = lambda[i], b = beta[i];
    const double sl = s * l;
    out.value += -sl + sl * std::log(sl) - (r * l + b) * std::log(r / (r + s)) -
                 sl * std::log(s / (r + s)) -
                 (expected_log_gamma((r + s) * l, b) - expected_log_gamma(r * l, b));
  }
  return out;
}

double gamma_risk_gap(std::span<const double> lambda, std::span<const double> alpha,
                      std::span<const double> beta, const ProblemSpec& spec) {
  check_lambda(lambda, spec);
  check_beta(beta, spec.dim());
  if (alpha.size() != spec.dim()) {
    fail(ErrorCode::invalid_argument, "gamma-prior alpha has wrong length");
  }
  double gap = 0.0;
  for (std::size_t i = 0; i < spec.dim(); ++i) {
    const double r = spec.r(i), s = spec.s(i), a = alpha[i];
    if (!(a >= 0.0)) fail(ErrorCode::invalid_argument, "gamma-prior alpha must be >= 0");
    gap += (r * lambda[i] + beta[i]) *
               (std::log(r / (r + s)) - std::log((r + a) / (r + s + a))) +
           s * lambda[i] * std::log((r + s + a) / (r + s));
  }
  return gap;
}

RiskEstimate kl_risk_gamma(std::span<const double> lambda,
                           std::span<const double> alpha,
                           std::span<const double> beta, const ProblemSpec& spec) {
  RiskEstimate out = kl_risk_power(lambda, beta, spec);
  out.value += gamma_risk_gap(lambda, alpha, beta, spec);
  return out;
}

RiskEstimate risk_reduction_f(const FPrior& prior, std::span<const double> lambda,
                              const ProblemSpec& spec, const ReductionOptions& options) {
  check_lambda(lambda, spec);
  if (prior.dim() != spec.dim()) {
    fail(ErrorCode::invalid_argument, "prior dimension does not match the problem");
  }
  RiskEstimate out;
  if (is_constant(prior)) return out;
  if (options.n < 2) fail(ErrorCode::invalid_argument, "risk reduction needs n >= 2");

  const std::size_t d = spec.dim();
  const std::size_t n = options.n;
  std::map<CountVector, std::size_t> plus_index, minus_index;
  std::vector<CountVector> plus_points, minus_points;
  std::vector<std::uint32_t> plus_of(n), minus_of(n);
  std::vector<Count> x(d), w(d);
  auto intern = [](std::map<CountVector, std::size_t>& index,
                   std::vector<CountVector>& points, const std::vector<Count>& z) {
    CountVector key(z);
    const auto [it, inserted] = index.emplace(key, points.size());
    if (inserted) points.push_back(std::move(key));
    return static_cast<std::uint32_t>(it->second);
  };
  for (std::size_t k = 0; k < n; ++k) {
    Rng rng(options.seed, k);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = rng.poisson(spec.r(i) * lambda[i]);
      w[i] = x[i] + rng.poisson(spec.s(i) * lambda[i]);
    }
    plus_of[k] = intern(plus_index, plus_points, w);
    minus_of[k] = intern(minus_index, minus_points, x);
  }

  const FEvaluator F(prior, spec.gamma(), options.inner, options.cache);
  const auto total = spec.total_durations();
  const std::vector<double> r(spec.r().begin(), spec.r().end());
  std::vector<FEstimate> plus(plus_points.size()), minus(minus_points.size());
  parallel_for(plus_points.size() + minus_points.size(), [&](std::size_t j) {
    if (j < plus_points.size()) {
      plus[j] = F(plus_points[j], total);
    } else {
      const std::size_t m = j - plus_points.size();
      minus[m] = F(minus_points[m], r);
    }
  });

  long double sum = 0.0L, sum_sq = 0.0L;
  for (std::size_t k = 0; k < n; ++k) {
    const double diff = plus[plus_of[k]].log_value - minus[minus_of[k]].log_value;
    sum += diff;
    sum_sq += static_cast<long double>(diff) * diff;
  }
  const double nd = static_cast<double>(n);
  const double mean = static_cast<double>(sum / nd);
  const double var = std::max(0.0, static_cast<double>((sum_sq - sum * sum / nd) / (nd - 1.0)));

  // Inner error: each distinct F enters with weight (occurrences / n).
  std::vector<double> plus_count(plus.size(), 0.0), minus_count(minus.size(), 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    plus_count[plus_of[k]] += 1.0;
    minus_count[minus_of[k]] += 1.0;
  }
  double inner_var = 0.0;
  for (std::size_t j = 0; j < plus.size(); ++j) {
    const double wgt = plus_count[j] / nd;
    inner_var += wgt * wgt * plus[j].std_error * plus[j].std_error;
  }
  for (std::size_t j = 0; j < minus.size(); ++j) {
    const double wgt = minus_count[j] / nd;
    inner_var += wgt * wgt * minus[j].std_error * minus[j].std_error;
  }

  out.value = mean;
  out.std_error = std::sqrt(var / nd + inner_var);
  out.method = F.exact() ? RiskMethod::monte_carlo : RiskMethod::hybrid;
  out.settings.n = n;
  out.settings.inner_n = F.exact() ? 0 : options.inner.n;
  out.settings.seed = options.seed;
  return out;
}

RiskEstimate kl_risk_f(const FPrior& prior, std::span<const double> lambda,
                       const ProblemSpec& spec, const ReductionOptions& options) {
  const RiskEstimate base = kl_risk_power(lambda, prior.beta(), spec);
  const RiskEstimate reduction = risk_reduction_f(prior, lambda, spec, options);
  RiskEstimate out = reduction;
  out.value = base.value - reduction.value;
  return out;
}

RiskEstimate kl_risk(const PriorSpec& prior, std::span<const double> lambda,
                     const ProblemSpec& spec, const ReductionOptions& options) {
  if (const auto* p = std::get_if<PowerPrior>(&prior)) {
    return kl_risk_power(lambda, p->beta, spec);
  }
  if (const auto* g = std::get_if<GammaPrior>(&prior)) {
    return kl_risk_gamma(lambda, g->alpha, g->beta, spec);
  }
  return kl_risk_f(std::get<FPrior>(prior), lambda, spec, options);
}

MinimaxBounds minimax_bounds(const ProblemSpec& spec) {
  double sum = 0.0;
  for (std::size_t i = 0; i < spec.dim(); ++i) {
    sum += std::log((spec.r(i) + spec.s(i)) / spec.r(i));
  }
  MinimaxBounds out;
  out.lower = 0.5 * sum;
  out.jeffreys_upper = 0.52 * sum;
  out.ratio = 1.04;
  return out;
}

RiskEstimate estimator_kl_risk(const EstimatorRule& rule, std::span<const double> lambda,
                               const ProblemSpec& spec, double prune) {
  check_lambda(lambda, spec);
  const std::size_t d = spec.dim();
  std::vector<Count> lo(d), hi(d);
  std::vector<std::vector<double>> log_pmf(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double mean = spec.r(i) * lambda[i];
    lo[i] = lower_truncation(mean);
    hi[i] = poisson_truncation(mean);
    for (Count k = lo[i]; k <= hi[i]; ++k) log_pmf[i].push_back(poisson_log_pmf(k, mean));
  }
  const double log_prune = std::log(prune);

  // Parallel over the first coordinate; the rest is an odometer walk.
  const std::size_t slots = static_cast<std::size_t>(hi[0] - lo[0] + 1);
  std::vector<long double> partial(slots, 0.0L);
  std::vector<char> infinite(slots, 0);
  parallel_for(slots, [&](std::size_t first) {
    std::vector<Count> z(d);
    std::vector<std::size_t> pos(d, 0);
    pos[0] = first;
    for (;;) {
      double lp = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        z[i] = lo[i] + static_cast<Count>(pos[i]);
        lp += log_pmf[i][pos[i]];
      }
      if (lp >= log_prune) {
        const std::vector<double> est = rule(CountVector(z));
        if (est.size() != d) {
          fail(ErrorCode::invalid_argument, "estimator returned the wrong length");
        }
        double loss = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          const double rl = spec.r(i) * lambda[i];
          if (!(est[i] > 0.0)) {
            infinite[first] = 1;
            break;
          }
          loss += rl * std::log(lambda[i] / est[i]) - rl + spec.r(i) * est[i];
        }
        partial[first] += std::exp(lp) * static_cast<long double>(loss);
      }
      std::size_t i = 1;
      while (i < d && ++pos[i] == log_pmf[i].size()) pos[i++] = 0;
      if (i >= d) break;
    }
  });

  RiskEstimate out;
  out.settings.truncation = "lattice sums to mean + 12 sqrt(mean) + 30, pruned below " +
                            std::to_string(prune);
  if (std::any_of(infinite.begin(), infinite.end(), [](char c) { return c != 0; })) {
    out.value = std::numeric_limits<double>::infinity();
    out.infinite = true;
    return out;
  }
  long double total = 0.0L;
  for (long double v : partial) total += v;
  out.value = static_cast<double>(total);
  return out;
}

double lemma_L(double lambda, int truncation) {
  if (!(lambda > 0.0)) fail(ErrorCode::invalid_argument, "lambda must be positive");
  if (truncation < 0) fail(ErrorCode::invalid_argument, "truncation must be >= 0");
  long double total = 0.0L;
  for (Count x = 0; x <= truncation; ++x) {
    total += std::log(static_cast<double>(x) + 0.5) * std::exp(poisson_log_pmf(x, lambda));
  }
  return static_cast<double>(total) * lambda - lambda * std::log(lambda);
}

double lemma_f(double lambda) {
  if (!(lambda > 0.0)) fail(ErrorCode::invalid_argument, "lambda must be positive");
  return lambda * poisson_expectation(lambda, [lambda](Count x) {
           return std::log((static_cast<double>(x) + 0.5) / lambda);
         });
}

double brute_force_risk_1d(const PredictiveLogPmf& q, std::span<const double> lambda,
                           const ProblemSpec& spec) {
  if (spec.dim() != 1) {
    fail(ErrorCode::unsupported_dimension, "brute-force risk is defined for d = 1");
  }
  check_lambda(lambda, spec);
  const double mx = spec.r(0) * lambda[0];
  const double my = spec.s(0) * lambda[0];
  long double total = 0.0L;
  for (Count x = lower_truncation(mx); x <= poisson_truncation(mx); ++x) {
    const double px = std::exp(poisson_log_pmf(x, mx));
    long double inner = 0.0L;
    for (Count y = lower_truncation(my); y <= poisson_truncation(my); ++y) {
      const double lp = poisson_log_pmf(y, my);
      inner += std::exp(lp) * static_cast<long double>(lp - q(x, y));
    }
    total += px * inner;
  }
  return static_cast<double>(total);
}

}  // namespace poshrink
