// SPDX-License-Identifier: Apache-2.0
#include "poshrink/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "json.hpp"
#include "poshrink/parallel.hpp"

namespace poshrink {

namespace {

using nlohmann::json;

void enumerate(std::size_t d, int budget, std::vector<Count>& prefix,
               std::vector<CountVector>& out) {
  if (prefix.size() == d) {
    out.emplace_back(prefix);
    return;
  }
  for (int v = 0; v <= budget; ++v) {
    prefix.push_back(v);
    enumerate(d, budget - v, prefix, out);
    prefix.pop_back();
  }
}

double weighted(const ProblemSpec& spec, std::span<const double> r, std::size_t i) {
  return spec.gamma(i) * r[i];
}

// Normalized left-hand side from F values relative to F(z).
double normalized_lhs(const ProblemSpec& spec, const FPrior& prior, const CountVector& z,
                      std::span<const double> r, std::span<const double> down_ratio,
                      std::span<const double> up_ratio) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double w = weighted(spec, r, i);
    const double shape = static_cast<double>(z[i]) + prior.beta(i);
    if (z[i] > 0) num += w * static_cast<double>(z[i]) * (1.0 - down_ratio[i]);
    num += w * shape * (1.0 - up_ratio[i]);
    den += w * shape;
  }
  return num / den;
}

void check_grid(const FPrior& prior, const ProblemSpec& spec,
                const std::vector<std::vector<double>>& r_grid, int z_max) {
  if (prior.dim() != spec.dim()) {
    fail(ErrorCode::invalid_argument, "prior dimension does not match the problem");
  }
  if (z_max < 0) fail(ErrorCode::invalid_argument, "z_max must be >= 0");
  if (static_cast<std::size_t>(z_max) > 30 * spec.dim()) {
    fail(ErrorCode::cost, "z_max = " + std::to_string(z_max) + " exceeds 30 d = " +
                              std::to_string(30 * spec.dim()));
  }
  if (r_grid.empty()) fail(ErrorCode::invalid_argument, "r grid is empty");
  for (const auto& r : r_grid) {
    if (r.size() != spec.dim()) {
      fail(ErrorCode::invalid_argument, "every r in the grid needs d entries");
    }
    for (double v : r) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        fail(ErrorCode::invalid_argument, "r grid entries must be positive");
      }
    }
  }
}

std::map<CountVector, std::size_t> index_of(const std::vector<CountVector>& points) {
  std::map<CountVector, std::size_t> index;
  for (std::size_t j = 0; j < points.size(); ++j) index.emplace(points[j], j);
  return index;
}

// Quadrature-backed: exact F on the lattice for one r.
std::vector<FineqPoint> fineq_exact(const FPrior& prior, const ProblemSpec& spec,
                                    const std::vector<double>& r,
                                    const std::vector<CountVector>& inner,
                                    const std::vector<CountVector>& outer) {
  const std::size_t d = spec.dim();
  const auto index = index_of(outer);
  const FEvaluator F(prior, spec.gamma());
  std::vector<double> log_f(outer.size());
  parallel_for(outer.size(), [&](std::size_t j) { log_f[j] = F(outer[j], r).log_value; });

  std::vector<FineqPoint> out;
  std::vector<double> down(d), up(d);
  for (const auto& z : inner) {
    const double here = log_f[index.at(z)];
    for (std::size_t i = 0; i < d; ++i) {
      down[i] = z[i] > 0 ? std::exp(log_f[index.at(z.shifted(i, -1))] - here) : 1.0;
      up[i] = std::exp(log_f[index.at(z.shifted(i, 1))] - here);
    }
    out.push_back({z, r, normalized_lhs(spec, prior, z, r, down, up), 0.0});
  }
  return out;
}

// Monte Carlo: every lattice F from one coupled sample set. Coordinate i uses
// G_i^(m) = G_i^(0) + E_i1 + ... + E_im ~ Gamma(m + beta_i), so each sample
// yields a whole lattice of f values and a per-sample left-hand side.
std::vector<FineqPoint> fineq_monte_carlo(const FPrior& prior, const ProblemSpec& spec,
                                          const std::vector<double>& r,
                                          const std::vector<CountVector>& inner,
                                          const std::vector<CountVector>& outer,
                                          int z_max, std::uint64_t seed, std::size_t n) {
  const std::size_t d = spec.dim();
  const auto index = index_of(outer);
  const auto gamma = spec.gamma();
  const std::size_t width = outer.size();
  std::vector<double> log_f(n * width);
  parallel_for(n, [&](std::size_t k) {
    Rng rng(seed, k);
    std::vector<std::vector<double>> g(d, std::vector<double>(z_max + 2));
    for (std::size_t i = 0; i < d; ++i) {
      g[i][0] = rng.gamma(prior.beta(i));
      for (int m = 1; m <= z_max + 1; ++m) g[i][m] = g[i][m - 1] + rng.exponential();
    }
    std::vector<double> theta(d);
    for (std::size_t j = 0; j < width; ++j) {
      for (std::size_t i = 0; i < d; ++i) {
        theta[i] = std::sqrt(g[i][outer[j][i]] / r[i] / gamma[i]);
      }
      const double v = eval_log_f_raw(prior, theta);
      if (v == std::numeric_limits<double>::infinity()) {
        fail(ErrorCode::singularity,
             "f is infinite at a sampled point; use eps > 0 for this family");
      }
      log_f[k * width + j] = v;
    }
  });
  const double shift = *std::max_element(log_f.begin(), log_f.end());
  for (double& v : log_f) v = std::exp(v - shift);

  std::vector<FineqPoint> out;
  const double nd = static_cast<double>(n);
  std::vector<double> num(n), den(n);
  for (const auto& z : inner) {
    const std::size_t here = index.at(z);
    std::vector<std::size_t> down(d), up(d);
    for (std::size_t i = 0; i < d; ++i) {
      down[i] = z[i] > 0 ? index.at(z.shifted(i, -1)) : here;
      up[i] = index.at(z.shifted(i, 1));
    }
    double sum_num = 0.0, sum_den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double* f = &log_f[k * width];
      double a = 0.0, b = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double w = weighted(spec, r, i);
        const double shape = static_cast<double>(z[i]) + prior.beta(i);
        if (z[i] > 0) a += w * static_cast<double>(z[i]) * (f[here] - f[down[i]]);
        a += w * shape * (f[here] - f[up[i]]);
        b += w * shape * f[here];
      }
      num[k] = a;
      den[k] = b;
      sum_num += a;
      sum_den += b;
    }
    const double ratio = sum_num / sum_den;
    double var = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double resid = num[k] - ratio * den[k];
      var += resid * resid;
    }
    var /= nd - 1.0;
    const double se = std::sqrt(var / nd) / (sum_den / nd);
    out.push_back({z, r, ratio, se});
  }
  return out;
}

std::optional<bool> subspace_target(const std::vector<std::vector<double>>& vperp,
                                    std::size_t d) {
  const auto basis = orthogonal_complement(vperp, d);
  if (basis.empty()) return true;  // V = {0}
  auto nonnegative = [](const std::vector<double>& v) {
    double norm = 0.0;
    for (double x : v) {
      if (x < -1e-12) return false;
      norm += x * x;
    }
    return norm > 1e-20;
  };
  std::vector<double> ones_projection(d, 0.0);
  for (const auto& b : basis) {
    double dot = 0.0;
    for (double x : b) dot += x;
    for (std::size_t i = 0; i < d; ++i) ones_projection[i] += dot * b[i];
  }
  if (nonnegative(ones_projection)) return true;
  for (auto b : basis) {
    if (nonnegative(b)) return true;
    for (double& x : b) x = -x;
    if (nonnegative(b)) return true;
  }
  return std::nullopt;
}

void certify_family(const Family& family, std::size_t d, Certification& out,
                    bool top_level) {
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantFamily>) {
          if (top_level) out.notes.push_back("constant f gives F = 1; no risk change");
        } else if constexpr (std::is_same_v<T, ShiftPointFamily>) {
          if (top_level) out.proposition = "Proposition 1";
          out.target_in_orthant = true;
        } else if constexpr (std::is_same_v<T, SymPointFamily>) {
          if (top_level) out.proposition = "Proposition 2";
          out.target_in_orthant = std::all_of(f.center.begin(), f.center.end(),
                                              [](double c) { return c >= 0.0; });
        } else if constexpr (std::is_same_v<T, PointFamily>) {
          out.notes.push_back("point priors need sign symmetrization to be certified");
        } else if constexpr (std::is_same_v<T, SymSubspaceFamily>) {
          if (top_level) out.proposition = "Proposition 3";
          out.target_in_orthant = subspace_target(f.vperp, d);
        } else if constexpr (std::is_same_v<T, CoordSubspaceFamily>) {
          if (top_level) out.proposition = "Proposition 3";
          out.target_in_orthant = true;
        } else {
          if (top_level) out.proposition = "Proposition 4";
          for (const auto& part : f.parts) certify_family(part, d, out, false);
        }
      },
      family.kind);
}

bool contains_point(const Family& family) {
  if (std::holds_alternative<PointFamily>(family.kind)) return true;
  if (const auto* sum = std::get_if<SumFamily>(&family.kind)) {
    return std::any_of(sum->parts.begin(), sum->parts.end(), contains_point);
  }
  return false;
}

json counts_json(const CountVector& z) {
  return json(std::vector<Count>(z.begin(), z.end()));
}

}  // namespace

std::vector<CountVector> lattice_points(std::size_t d, int z_max) {
  std::vector<CountVector> out;
  std::vector<Count> prefix;
  enumerate(d, z_max, prefix, out);
  std::sort(out.begin(), out.end(), [](const CountVector& a, const CountVector& b) {
    if (a.total() != b.total()) return a.total() < b.total();
    return a < b;
  });
  return out;
}

FineqReport check_fineq(const FPrior& prior, const ProblemSpec& spec,
                        const std::vector<std::vector<double>>& r_grid, int z_max,
                        const FineqOptions& options) {
  check_grid(prior, spec, r_grid, z_max);
  if (!(options.tol_rel >= 0.0)) fail(ErrorCode::invalid_argument, "tol must be >= 0");
  const bool exact = quadrature_supported(prior);
  if (!exact && options.n < 1000) {
    fail(ErrorCode::invalid_argument, "Monte Carlo condition check needs n >= 1000");
  }
  const auto inner = lattice_points(spec.dim(), z_max);
  const auto outer = lattice_points(spec.dim(), z_max + 1);

  FineqReport report;
  report.prior = prior.describe();
  report.r_grid = r_grid;
  report.z_max = z_max;
  report.lattice_points = inner.size();
  report.backend = exact ? "quadrature" : "monte-carlo";
  report.tol_rel = options.tol_rel;

  MonteCarloSettings mc;
  mc.singular_eps = options.singular_eps;
  const FPrior effective = exact ? prior : monte_carlo_prior(prior, mc);
  std::vector<std::vector<FineqPoint>> per_r(r_grid.size());
  for (std::size_t g = 0; g < r_grid.size(); ++g) {
    per_r[g] = exact ? fineq_exact(prior, spec, r_grid[g], inner, outer)
                     : fineq_monte_carlo(effective, spec, r_grid[g], inner, outer, z_max,
                                         mix_seed(options.seed, g), options.n);
  }
  report.pass = true;
  report.min_lhs = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < inner.size(); ++j) {
    for (std::size_t g = 0; g < r_grid.size(); ++g) {
      const FineqPoint& p = per_r[g][j];
      const double threshold = -(options.tol_rel + 5.0 * p.std_error);
      if (p.lhs < threshold) report.pass = false;
      if (p.lhs < report.min_lhs) {
        report.min_lhs = p.lhs;
        report.min_threshold = threshold;
        report.argmin_z = p.z;
        report.argmin_r = p.r;
      }
      report.points.push_back(p);
    }
  }
  return report;
}

std::string FineqReport::to_json() const {
  json grid = json::object();
  grid["r"] = r_grid;
  grid["z_max"] = z_max;
  grid["lattice_points"] = lattice_points;
  json j;
  j["prior"] = prior;
  j["grid"] = grid;
  j["backend"] = backend;
  j["tol_rel"] = tol_rel;
  j["min_lhs"] = min_lhs;
  j["min_threshold"] = min_threshold;
  j["argmin_z"] = counts_json(argmin_z);
  j["argmin_r"] = argmin_r;
  j["pass"] = pass;
  return j.dump(2);
}

bool check_nonconstant_F(const FPrior& prior, const ProblemSpec& spec,
                         std::span<const double> r, int z_max,
                         const MonteCarloSettings& settings) {
  check_grid(prior, spec, {std::vector<double>(r.begin(), r.end())}, z_max);
  if (std::holds_alternative<ConstantFamily>(prior.family().kind)) return false;
  const auto points = lattice_points(spec.dim(), z_max);
  const FEvaluator F(prior, spec.gamma(), settings);
  std::vector<FEstimate> values(points.size());
  parallel_for(points.size(), [&](std::size_t j) { values[j] = F(points[j], r); });
  const auto [lo, hi] = std::minmax_element(
      values.begin(), values.end(),
      [](const FEstimate& a, const FEstimate& b) { return a.log_value < b.log_value; });
  return hi->log_value - lo->log_value > 3.0 * std::hypot(hi->std_error, lo->std_error) + 1e-9;
}

Certification certify_builtin(const FPrior& prior) {
  Certification out;
  out.violations = hypothesis_violations(prior);
  certify_family(prior.family(), prior.dim(), out, true);
  const bool constant = std::holds_alternative<ConstantFamily>(prior.family().kind);
  out.certified = out.violations.empty() && !constant && !contains_point(prior.family());
  if (!out.certified) out.proposition.clear();
  return out;
}

std::string Certification::to_json() const {
  json j;
  j["certified"] = certified;
  j["proposition"] = proposition.empty() ? json(nullptr) : json(proposition);
  j["violations"] = violations;
  j["notes"] = notes;
  j["target_in_orthant"] = target_in_orthant ? json(*target_in_orthant) : json(nullptr);
  return j.dump(2);
}

}  // namespace poshrink
