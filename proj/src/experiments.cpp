// SPDX-License-Identifier: Apache-2.0
#include "poshrink/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "poshrink/predictive.hpp"

namespace poshrink {

namespace {

FPrior jeffreys_prior(Family family, std::size_t d) {
  return FPrior(std::move(family), std::vector<double>(d, 0.5));
}

Family shift_point(double alpha, double eta) { return Family{ShiftPointFamily{alpha, eta}}; }

Family coord(double alpha, std::vector<std::size_t> indices) {
  return Family{CoordSubspaceFamily{alpha, std::move(indices)}};
}

std::string format_value(double v) {
  if (std::isnan(v)) return "NaN";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

ExperimentDesign experiment_design(int id) {
  ExperimentDesign design;
  design.id = id;
  switch (id) {
    case 1:
      design.direction.assign(3, 1.0 / 3.0);
      design.priors.push_back({"point", jeffreys_prior(shift_point(0.5, 0.0), 3)});
      design.priors.push_back({"shift-point", jeffreys_prior(shift_point(0.5, 1.0), 3)});
      break;
    case 2:
      design.direction.assign(3, 0.4);
      design.priors.push_back({"point-origin", jeffreys_prior(shift_point(0.5, 0.0), 3)});
      design.priors.push_back(
          {"sym-point", jeffreys_prior(Family{SymPointFamily{0.5, {2.0, 2.0, 2.0}}}, 3)});
      design.priors.push_back(
          {"harmonic", jeffreys_prior(Family{PointFamily{0.5, {2.0, 2.0, 2.0}}}, 3)});
      break;
    case 3: {
      design.direction.assign(4, 0.4);
      design.priors.push_back({"point", jeffreys_prior(shift_point(1.0, 0.0), 4)});
      auto vperp = orthogonal_complement({{1.0, 1.0, 1.0, 1.0}}, 4);
      design.priors.push_back(
          {"subspace", jeffreys_prior(Family{SymSubspaceFamily{0.5, std::move(vperp)}}, 4)});
      break;
    }
    case 4: {
      design.direction = {0.05, 0.05, 0.05, 5.0};
      design.priors.push_back({"point", jeffreys_prior(shift_point(1.0, 0.0), 4)});
      design.priors.push_back({"subspace-1", jeffreys_prior(coord(0.5, {0, 1, 2}), 4)});
      design.priors.push_back({"subspace-2", jeffreys_prior(coord(0.5, {0, 1, 3}), 4)});
      SumFamily mix;
      for (std::size_t drop = 0; drop < 4; ++drop) {
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < 4; ++i) {
          if (i != drop) keep.push_back(i);
        }
        mix.parts.push_back(coord(0.5, keep));
      }
      design.priors.push_back({"mix", jeffreys_prior(Family{std::move(mix)}, 4)});
      break;
    }
    default:
      fail(ErrorCode::invalid_argument,
           "experiment id must be 1, 2, 3 or 4, got " + std::to_string(id));
  }
  return design;
}

std::vector<double> log_grid(double a, double b, std::size_t k) {
  if (!(a > 0.0) || !(b >= a) || k == 0) {
    fail(ErrorCode::invalid_argument, "grid needs 0 < a <= b and k >= 1");
  }
  if (k == 1) return {a};
  std::vector<double> grid(k);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t j = 0; j < k; ++j) {
    grid[j] = std::exp(la + (lb - la) * static_cast<double>(j) / static_cast<double>(k - 1));
  }
  grid.front() = a;
  grid.back() = b;
  return grid;
}

std::vector<double> default_lambda_grid() { return log_grid(0.1, 10.0, 20); }

ExperimentTable run_design(const ExperimentDesign& design, const std::vector<double>& grid,
                           const ReductionOptions& options) {
  for (double v : grid) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorCode::invalid_argument, "Lambda grid entries must be positive");
    }
  }
  ExperimentTable table;
  table.id = design.id;
  table.grid = grid;
  table.design = design;
  table.n = options.n;
  table.inner_n = options.inner.n;
  table.seed = options.seed;

  const ProblemSpec spec = ProblemSpec::uniform(design.dim(), 1.0, 1.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::vector<double> lambda(design.direction);
    for (double& l : lambda) l *= grid[j];
    ReductionOptions local = options;
    local.seed = mix_seed(options.seed, j);
    for (const auto& p : design.priors) {
      const RiskEstimate est = risk_reduction_f(p.prior, lambda, spec, local);
      table.rows.push_back({grid[j], p.name, est.value, est.std_error});
    }
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ExperimentRow& a, const ExperimentRow& b) {
                     if (a.Lambda != b.Lambda) return a.Lambda < b.Lambda;
                     return a.prior < b.prior;
                   });
  return table;
}

ExperimentTable run_experiment(int id, const std::vector<double>& grid,
                               const ReductionOptions& options) {
  return run_design(experiment_design(id), grid, options);
}

std::string plot_data_csv(const ExperimentTable& table) {
  std::string out = "Lambda,prior,reduction,se,log_reduction\n";
  for (const auto& row : table.rows) {
    const double log_reduction =
        row.reduction > 0.0 ? std::log(row.reduction) : std::numeric_limits<double>::quiet_NaN();
    out += format_value(row.Lambda) + "," + row.prior + "," + format_value(row.reduction) +
           "," + format_value(row.se) + "," + format_value(log_reduction) + "\n";
  }
  return out;
}

void emit_plot_data(const ExperimentTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write '" + path + "'");
  out << plot_data_csv(table);
  if (!out) fail(ErrorCode::io, "write to '" + path + "' failed");
}

std::string experiment_sidecar_json(const ExperimentTable& table) {
  nlohmann::ordered_json j;
  j["experiment"] = table.id;
  j["d"] = table.design.dim();
  j["r"] = 1.0;
  j["s"] = 1.0;
  j["direction"] = table.design.direction;
  j["grid"] = table.grid;
  j["n"] = table.n;
  j["inner_n"] = table.inner_n;
  j["seed"] = table.seed;
  j["seed_rule"] = "grid point j uses mix_seed(seed, j)";
  auto priors = nlohmann::ordered_json::array();
  for (const auto& p : table.design.priors) {
    priors.push_back({{"name", p.name}, {"prior", p.prior.describe()}});
  }
  j["priors"] = priors;
  j["columns"] = {"Lambda", "prior", "reduction", "se", "log_reduction"};
  j["log_base"] = "e";
  return j.dump(2) + "\n";
}

Metrics distance_metrics(std::span<const double> y_hat, const CountVector& y) {
  if (y_hat.size() != y.size()) {
    fail(ErrorCode::invalid_argument, "prediction and observation lengths differ");
  }
  Metrics m;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double yi = static_cast<double>(y[i]);
    const double yh = y_hat[i];
    if (yi > 0.0) {
      if (yh <= 0.0) {
        m.kl_infinite = true;
      } else {
        m.kl_dist += yh - yi - yi * (std::log(yh) - std::log(yi));
      }
    } else {
      m.kl_dist += yh;
    }
    m.ws_dist += (yh - yi) * (yh - yi) / (yi + 1.0);
  }
  if (m.kl_infinite) m.kl_dist = std::numeric_limits<double>::infinity();
  return m;
}

Metrics eval_metrics(const CountVector& x, const CountVector& y, const PriorSpec& prior,
                     const ProblemSpec& spec, const MonteCarloSettings& settings) {
  const std::vector<double> y_hat = predictive_mean(prior, x, spec, settings);
  Metrics m = distance_metrics(y_hat, y);
  const PredictiveValue ll = log_predictive(prior, x, y, spec, settings);
  m.loglik = ll.value;
  m.loglik_se = ll.std_error;
  return m;
}

}  // namespace poshrink
