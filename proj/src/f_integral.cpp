// SPDX-License-Identifier: Apache-2.0
#include "poshrink/f_integral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "poshrink/quadrature.hpp"

namespace poshrink {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// One term c * (sum_{i in S} theta_i^2 + eta)^(-alpha); alpha == 0 is the
// constant c.
struct QuadTerm {
  double log_coef = 0.0;
  double alpha = 0.0;
  double eta = 0.0;
  std::vector<std::size_t> indices;
};

std::vector<std::size_t> all_indices(std::size_t d) {
  std::vector<std::size_t> out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = i;
  return out;
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

// Index of the coordinate axis v lies on (up to sign), if any.
std::optional<std::size_t> axis_of(const std::vector<double>& v) {
  std::optional<std::size_t> axis;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) <= 1e-12) continue;
    if (axis || std::abs(std::abs(v[i]) - 1.0) > 1e-12) return std::nullopt;
    axis = i;
  }
  return axis;
}

bool decompose(const Family& family, std::size_t d, double eps,
               std::vector<QuadTerm>& out) {
  const double sign_sum = static_cast<double>(d) * std::numbers::ln2;
  if (const auto* f = std::get_if<ConstantFamily>(&family.kind)) {
    (void)f;
    out.push_back({});
    return true;
  }
  if (const auto* f = std::get_if<ShiftPointFamily>(&family.kind)) {
    out.push_back({0.0, f->alpha, f->eta, all_indices(d)});
    return true;
  }
  if (const auto* f = std::get_if<CoordSubspaceFamily>(&family.kind)) {
    out.push_back({0.0, f->alpha, eps, f->indices});
    return true;
  }
  if (const auto* f = std::get_if<SymPointFamily>(&family.kind)) {
    if (!all_zero(f->center)) return false;
    out.push_back({sign_sum, f->alpha, eps, all_indices(d)});
    return true;
  }
  if (const auto* f = std::get_if<PointFamily>(&family.kind)) {
    if (!all_zero(f->center)) return false;
    out.push_back({0.0, f->alpha, eps, all_indices(d)});
    return true;
  }
  if (const auto* f = std::get_if<SymSubspaceFamily>(&family.kind)) {
    std::vector<std::size_t> indices;
    for (const auto& v : f->vperp) {
      const auto axis = axis_of(v);
      if (!axis) return false;
      indices.push_back(*axis);
    }
    out.push_back({sign_sum, f->alpha, eps, std::move(indices)});
    return true;
  }
  const auto& sum = std::get<SumFamily>(family.kind);
  for (const auto& part : sum.parts) {
    if (!decompose(part, d, eps, out)) return false;
  }
  return true;
}

bool has_singular_part(const Family& family) {
  if (std::holds_alternative<PointFamily>(family.kind) ||
      std::holds_alternative<SymPointFamily>(family.kind) ||
      std::holds_alternative<SymSubspaceFamily>(family.kind)) {
    return true;
  }
  if (const auto* sum = std::get_if<SumFamily>(&family.kind)) {
    return std::any_of(sum->parts.begin(), sum->parts.end(), has_singular_part);
  }
  return false;
}

bool has_sym_subspace(const Family& family) {
  if (std::holds_alternative<SymSubspaceFamily>(family.kind)) return true;
  if (const auto* sum = std::get_if<SumFamily>(&family.kind)) {
    return std::any_of(sum->parts.begin(), sum->parts.end(), has_sym_subspace);
  }
  return false;
}

void check_arguments(std::size_t d, const CountVector& z, std::span<const double> t,
                     std::span<const double> gamma) {
  if (z.size() != d || t.size() != d || gamma.size() != d) {
    fail(ErrorCode::invalid_argument,
         "F arguments must all have length d = " + std::to_string(d));
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!(t[i] > 0.0) || !std::isfinite(t[i])) {
      fail(ErrorCode::invalid_argument, "F rates t must be positive");
    }
    if (!(gamma[i] > 0.0) || !std::isfinite(gamma[i])) {
      fail(ErrorCode::invalid_argument, "gamma weights must be positive");
    }
  }
}

inline double log1p_exp(double x) {
  return x > 35.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double logistic(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// log of Gamma(alpha)^(-1) int_0^inf v^(alpha-1) e^(-eta v)
// prod (1 + v / c_i)^(-k_i) dv, integrated over u = log v.
double log_quadrature_term(const QuadTerm& term, const CountVector& z,
                           std::span<const double> beta, std::span<const double> t,
                           std::span<const double> gamma) {
  if (term.alpha == 0.0) return term.log_coef;
  std::vector<double> k;
  std::vector<double> log_c;
  double shape_total = 0.0;
  for (std::size_t i : term.indices) {
    k.push_back(static_cast<double>(z[i]) + beta[i]);
    log_c.push_back(std::log(gamma[i] * t[i]));
    shape_total += k.back();
  }
  const double alpha = term.alpha;
  const double eta = term.eta;
  if (eta == 0.0 && alpha >= shape_total) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "F diverges: alpha = %g must be below sum(z_i + beta_i) = %g "
                  "over the shrinkage coordinates (Proposition 1 requires "
                  "alpha <= sum(beta) - 1)",
                  alpha, shape_total);
    fail(ErrorCode::integrability, buf);
  }

  auto log_integrand = [&](double u) {
    double g = alpha * u;
    if (eta > 0.0) g -= eta * std::exp(u);
    for (std::size_t j = 0; j < k.size(); ++j) g -= k[j] * log1p_exp(u - log_c[j]);
    return g;
  };
  auto slope = [&](double u) {
    double g = alpha;
    if (eta > 0.0) g -= eta * std::exp(u);
    for (std::size_t j = 0; j < k.size(); ++j) g -= k[j] * logistic(u - log_c[j]);
    return g;
  };

  // The log integrand is concave in u; bracket and bisect its stationary point.
  double lo = -1.0, hi = 1.0;
  while (slope(lo) <= 0.0) lo = 2.0 * lo - 1.0;
  while (slope(hi) >= 0.0) {
    hi = 2.0 * hi + 1.0;
    if (hi > 1e8) fail(ErrorCode::integrability, "F integrand does not decay");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  const double mode = 0.5 * (lo + hi);
  const double peak = log_integrand(mode);

  constexpr double drop = 60.0;
  auto reach = [&](double direction) {
    double step = 1.0;
    while (log_integrand(mode + direction * step) > peak - drop) {
      step *= 2.0;
      if (step > 1e8) fail(ErrorCode::integrability, "F integrand does not decay");
    }
    return mode + direction * step;
  };
  const double left = reach(-1.0);
  const double right = reach(1.0);

  auto scaled = [&](double u) { return std::exp(log_integrand(u) - peak); };
  const auto a = integrate_gauss_kronrod(scaled, left, mode, 1e-10, 0.0, 4000);
  const auto b = integrate_gauss_kronrod(scaled, mode, right, 1e-10, 0.0, 4000);
  return term.log_coef + peak + std::log(a.value + b.value) - log_gamma_fn(alpha);
}

struct SampleSummary {
  double log_mean = 0.0;
  double rel_se = 0.0;
};

SampleSummary summarize(const std::vector<double>& log_values, std::size_t blocks) {
  const std::size_t n = log_values.size();
  double m = -inf;
  for (double v : log_values) {
    if (v == inf) {
      fail(ErrorCode::singularity,
           "f is infinite at a sampled point; use eps > 0 for this family");
    }
    m = std::max(m, v);
  }
  if (m == -inf) fail(ErrorCode::domain, "f vanished at every sampled point");
  double sum = 0.0, sum_sq = 0.0;
  for (double v : log_values) {
    const double w = std::exp(v - m);
    sum += w;
    sum_sq += w * w;
  }
  const double nd = static_cast<double>(n);
  const double mean = sum / nd;
  const double var = std::max(0.0, (sum_sq - nd * mean * mean) / (nd - 1.0));
  SampleSummary out;
  out.rel_se = std::sqrt(var / nd) / mean;
  out.log_mean = m + std::log(mean);
  if (blocks >= 2 && n >= blocks) {
    std::vector<double> block_means(blocks, 0.0);
    const std::size_t size = n / blocks;
    for (std::size_t b = 0; b < blocks; ++b) {
      double s = 0.0;
      for (std::size_t j = b * size; j < (b + 1) * size; ++j) s += std::exp(log_values[j] - m);
      block_means[b] = s / static_cast<double>(size);
    }
    std::sort(block_means.begin(), block_means.end());
    const double median = blocks % 2 == 1
                              ? block_means[blocks / 2]
                              : 0.5 * (block_means[blocks / 2 - 1] + block_means[blocks / 2]);
    out.log_mean = m + std::log(median);
    out.rel_se *= std::sqrt(std::numbers::pi / 2.0);
  }
  return out;
}

FEstimate make_estimate(const CountVector& z, std::span<const double> t) {
  FEstimate est;
  est.z = z;
  est.t.assign(t.begin(), t.end());
  return est;
}

void check_sample_count(std::size_t n) {
  if (n < 1000) fail(ErrorCode::invalid_argument, "Monte Carlo F needs n >= 1000");
}

}  // namespace

const char* backend_name(FBackend backend) noexcept {
  return backend == FBackend::quadrature ? "quadrature" : "monte-carlo";
}

bool quadrature_supported(const FPrior& prior) {
  std::vector<QuadTerm> terms;
  return decompose(prior.family(), prior.dim(), prior.epsilon(), terms);
}

FEstimate F_quadrature(const FPrior& prior, const CountVector& z,
                       std::span<const double> t, std::span<const double> gamma) {
  check_arguments(prior.dim(), z, t, gamma);
  std::vector<QuadTerm> terms;
  if (!decompose(prior.family(), prior.dim(), prior.epsilon(), terms)) {
    fail(ErrorCode::invalid_argument,
         "quadrature backend needs a sum of (sum_S theta_i^2 + eta)^(-alpha) "
         "terms; " + prior.describe() + " is not of that form");
  }
  std::vector<double> logs;
  logs.reserve(terms.size());
  for (const auto& term : terms) {
    logs.push_back(log_quadrature_term(term, z, prior.beta(), t, gamma));
  }
  FEstimate est = make_estimate(z, t);
  est.log_value = log_sum_exp(logs);
  est.backend = FBackend::quadrature;
  return est;
}

FPrior monte_carlo_prior(const FPrior& prior, const MonteCarloSettings& settings) {
  if (prior.epsilon() == 0.0 && has_sym_subspace(prior.family())) {
    return prior.with_epsilon(settings.singular_eps);
  }
  return prior;
}

FEstimate F_monte_carlo(const std::function<double(std::span<const double>)>& log_f,
                        std::span<const double> beta, const CountVector& z,
                        std::span<const double> t, std::span<const double> gamma,
                        const MonteCarloSettings& settings) {
  const std::size_t d = beta.size();
  check_arguments(d, z, t, gamma);
  check_sample_count(settings.n);
  Rng rng(settings.seed, 0);
  std::vector<double> theta(d);
  std::vector<double> log_values(settings.n);
  for (std::size_t k = 0; k < settings.n; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      const double lambda = rng.gamma(static_cast<double>(z[i]) + beta[i]) / t[i];
      theta[i] = std::sqrt(lambda / gamma[i]);
    }
    log_values[k] = log_f(theta);
  }
  const auto summary = summarize(log_values, 0);
  FEstimate est = make_estimate(z, t);
  est.log_value = summary.log_mean;
  est.std_error = summary.rel_se;
  est.backend = FBackend::monte_carlo;
  est.n_samples = settings.n;
  return est;
}

FEstimate F_monte_carlo(const FPrior& prior, const CountVector& z,
                        std::span<const double> t, std::span<const double> gamma,
                        const MonteCarloSettings& settings) {
  const FPrior effective = monte_carlo_prior(prior, settings);
  const std::size_t d = prior.dim();
  check_arguments(d, z, t, gamma);
  check_sample_count(settings.n);
  Rng rng(settings.seed, 0);
  std::vector<double> theta(d);
  std::vector<double> log_values(settings.n);
  for (std::size_t k = 0; k < settings.n; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      const double lambda =
          rng.gamma(static_cast<double>(z[i]) + effective.beta(i)) / t[i];
      theta[i] = std::sqrt(lambda / gamma[i]);
    }
    log_values[k] = eval_log_f_raw(effective, theta);
  }
  const bool robust = effective.epsilon() > 0.0 && has_singular_part(effective.family());
  const auto summary = summarize(log_values, robust ? settings.blocks : 0);
  FEstimate est = make_estimate(z, t);
  est.log_value = summary.log_mean;
  est.std_error = summary.rel_se;
  est.backend = FBackend::monte_carlo;
  est.n_samples = settings.n;
  return est;
}

FEstimate evaluate_F(const FPrior& prior, const CountVector& z,
                     std::span<const double> t, std::span<const double> gamma,
                     const MonteCarloSettings& settings) {
  if (quadrature_supported(prior)) return F_quadrature(prior, z, t, gamma);
  const auto* sum = std::get_if<SumFamily>(&prior.family().kind);
  if (sum == nullptr) return F_monte_carlo(prior, z, t, gamma, settings);

  // F is additive over the parts of a sum.
  std::vector<FEstimate> parts;
  for (const auto& part : sum->parts) {
    const FPrior single(part, std::vector<double>(prior.beta().begin(), prior.beta().end()),
                        prior.epsilon());
    parts.push_back(evaluate_F(single, z, t, gamma, settings));
  }
  std::vector<double> logs;
  for (const auto& p : parts) logs.push_back(p.log_value);
  FEstimate est = make_estimate(z, t);
  est.log_value = log_sum_exp(logs);
  double var = 0.0;
  for (const auto& p : parts) {
    const double share = std::exp(p.log_value - est.log_value);
    var += share * share * p.std_error * p.std_error;
    est.n_samples = std::max(est.n_samples, p.n_samples);
  }
  est.std_error = std::sqrt(var);
  est.backend = FBackend::monte_carlo;
  return est;
}

LogRatio log_F_ratio(const FPrior& prior, const CountVector& z_num,
                     std::span<const double> t_num, const CountVector& z_den,
                     std::span<const double> t_den, std::span<const double> gamma,
                     const MonteCarloSettings& settings) {
  const std::size_t d = prior.dim();
  check_arguments(d, z_num, t_num, gamma);
  check_arguments(d, z_den, t_den, gamma);
  if (z_num == z_den && std::equal(t_num.begin(), t_num.end(), t_den.begin())) {
    return {};
  }
  if (quadrature_supported(prior)) {
    return {F_quadrature(prior, z_num, t_num, gamma).log_value -
                F_quadrature(prior, z_den, t_den, gamma).log_value,
            0.0};
  }
  check_sample_count(settings.n);
  const FPrior effective = monte_carlo_prior(prior, settings);
  Rng rng(settings.seed, 0);
  std::vector<double> theta_num(d), theta_den(d);
  std::vector<double> log_num(settings.n), log_den(settings.n);
  for (std::size_t k = 0; k < settings.n; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      const Count low = std::min(z_num[i], z_den[i]);
      const double base = rng.gamma(static_cast<double>(low) + effective.beta(i));
      double extra = 0.0;
      for (Count j = low; j < std::max(z_num[i], z_den[i]); ++j) extra += rng.exponential();
      const double g_num = z_num[i] > low ? base + extra : base;
      const double g_den = z_den[i] > low ? base + extra : base;
      theta_num[i] = std::sqrt(g_num / t_num[i] / gamma[i]);
      theta_den[i] = std::sqrt(g_den / t_den[i] / gamma[i]);
    }
    log_num[k] = eval_log_f_raw(effective, theta_num);
    log_den[k] = eval_log_f_raw(effective, theta_den);
  }
  for (std::size_t k = 0; k < settings.n; ++k) {
    if (log_num[k] == inf || log_den[k] == inf) {
      fail(ErrorCode::singularity,
           "f is infinite at a sampled point; use eps > 0 for this family");
    }
  }
  const double m_num = *std::max_element(log_num.begin(), log_num.end());
  const double m_den = *std::max_element(log_den.begin(), log_den.end());
  const double nd = static_cast<double>(settings.n);
  double s_num = 0.0, s_den = 0.0;
  for (std::size_t k = 0; k < settings.n; ++k) {
    s_num += std::exp(log_num[k] - m_num);
    s_den += std::exp(log_den[k] - m_den);
  }
  const double mean_num = s_num / nd, mean_den = s_den / nd;
  double var = 0.0;
  for (std::size_t k = 0; k < settings.n; ++k) {
    const double diff = std::exp(log_num[k] - m_num) / mean_num -
                        std::exp(log_den[k] - m_den) / mean_den;
    var += diff * diff;
  }
  var /= nd - 1.0;
  return {m_num + std::log(mean_num) - m_den - std::log(mean_den), std::sqrt(var / nd)};
}

SmoothingSensitivity smoothing_sensitivity(const FPrior& prior, const CountVector& z,
                                           std::span<const double> t,
                                           std::span<const double> gamma,
                                           const MonteCarloSettings& settings) {
  const auto low = F_monte_carlo(prior.with_epsilon(1e-6), z, t, gamma, settings);
  const auto high = F_monte_carlo(prior.with_epsilon(1e-4), z, t, gamma, settings);
  SmoothingSensitivity out;
  out.log_F_default = low.log_value;
  out.log_F_rerun = high.log_value;
  out.difference = high.log_value - low.log_value;
  out.std_error = std::hypot(low.std_error, high.std_error);
  return out;
}

double quantize_rate(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", t);
  return std::strtod(buf, nullptr);
}

std::uint64_t hash_lattice_point(const CountVector& z, std::span<const double> t) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (Count v : z) mix(static_cast<std::uint64_t>(v));
  for (double v : t) mix(std::bit_cast<std::uint64_t>(quantize_rate(v)));
  return h;
}

// --- cache ------------------------------------------------------------------

FCache::FCache(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}

std::size_t FCache::KeyHash::operator()(const Key& key) const noexcept {
  std::uint64_t h = key.prior ^ (key.settings * 0x9e3779b97f4a7c15ULL);
  for (Count v : key.z) h = mix_seed(h, static_cast<std::uint64_t>(v));
  for (double v : key.t) h = mix_seed(h, std::bit_cast<std::uint64_t>(v));
  return static_cast<std::size_t>(h);
}

bool FCache::lookup(const Key& key, FEstimate& out) {
  std::lock_guard lock(mutex_);
  if (!enabled_) return false;
  const auto it = index_.find(key);
  if (it == index_.end()) {
    ++misses_;
    return false;
  }
  ++hits_;
  order_.splice(order_.begin(), order_, it->second);
  out = it->second->second;
  return true;
}

void FCache::insert(const Key& key, const FEstimate& value) {
  std::lock_guard lock(mutex_);
  if (!enabled_ || index_.contains(key)) return;
  order_.emplace_front(key, value);
  index_.emplace(key, order_.begin());
  if (order_.size() > capacity_) {
    index_.erase(order_.back().first);
    order_.pop_back();
  }
}

void FCache::set_enabled(bool enabled) {
  std::lock_guard lock(mutex_);
  enabled_ = enabled;
}

bool FCache::enabled() const {
  std::lock_guard lock(mutex_);
  return enabled_;
}

void FCache::clear() {
  std::lock_guard lock(mutex_);
  order_.clear();
  index_.clear();
  hits_ = misses_ = 0;
}

std::size_t FCache::size() const {
  std::lock_guard lock(mutex_);
  return order_.size();
}

std::size_t FCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t FCache::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

double FCache::hit_rate() const {
  std::lock_guard lock(mutex_);
  const std::size_t total = hits_ + misses_;
  return total == 0 ? 0.0 : static_cast<double>(hits_) / static_cast<double>(total);
}

// --- evaluator --------------------------------------------------------------

FEvaluator::FEvaluator(FPrior prior, std::vector<double> gamma,
                       MonteCarloSettings settings, std::shared_ptr<FCache> cache)
    : prior_(std::move(prior)),
      gamma_(std::move(gamma)),
      settings_(settings),
      cache_(std::move(cache)),
      exact_(quadrature_supported(prior_)) {
  if (gamma_.size() != prior_.dim()) {
    fail(ErrorCode::invalid_argument, "gamma length does not match the prior");
  }
  // Monte Carlo settings only affect non-exact priors.
  std::uint64_t key = 0;
  for (double g : gamma_) key = mix_seed(key, std::bit_cast<std::uint64_t>(g));
  if (!exact_) {
    key = mix_seed(key, settings_.n);
    key = mix_seed(key, settings_.seed);
    key = mix_seed(key, std::bit_cast<std::uint64_t>(settings_.singular_eps));
    key = mix_seed(key, settings_.blocks);
  }
  settings_key_ = key;
}

FEstimate FEvaluator::operator()(const CountVector& z, std::span<const double> t) const {
  std::vector<double> tq(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) tq[i] = quantize_rate(t[i]);

  FCache::Key key;
  if (cache_) {
    key.prior = prior_.fingerprint();
    key.settings = settings_key_;
    key.z.assign(z.begin(), z.end());
    key.t = tq;
    FEstimate hit;
    if (cache_->lookup(key, hit)) return hit;
  }
  MonteCarloSettings local = settings_;
  local.seed = mix_seed(settings_.seed, hash_lattice_point(z, tq));
  FEstimate est = evaluate_F(prior_, z, tq, gamma_, local);
  if (cache_) cache_->insert(key, est);
  return est;
}

LogRatio FEvaluator::shift_ratio(const CountVector& z, std::size_t i,
                                 std::span<const double> t) const {
  const CountVector up = z.shifted(i, 1);
  if (exact_) return {(*this)(up, t).log_value - (*this)(z, t).log_value, 0.0};
  MonteCarloSettings local = settings_;
  local.seed = mix_seed(mix_seed(settings_.seed, hash_lattice_point(z, t)), i + 1);
  return log_F_ratio(prior_, up, t, z, t, gamma_, local);
}

}  // namespace poshrink
