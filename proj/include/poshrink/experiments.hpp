// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "poshrink/core.hpp"
#include "poshrink/risk.hpp"
#include "poshrink/theta_priors.hpp"

namespace poshrink {

struct ExperimentPrior {
  std::string name;
  FPrior prior;
};

/// Risk-reduction study at r = s = 1 along lambda = Lambda * direction.
struct ExperimentDesign {
  int id = 0;
  std::vector<double> direction;
  std::vector<ExperimentPrior> priors;

  std::size_t dim() const noexcept { return direction.size(); }
};

/// Designs 1 to 4:
///   1: d = 3, direction (1/3, 1/3, 1/3); point (alpha 1/2) and shift-point
///      (alpha 1/2, eta 1).
///   2: d = 3, direction 0.4; point-origin, sym-point centred at (2, 2, 2)
///      and the unsymmetrized harmonic prior centred there, all alpha 1/2.
///   3: d = 4, direction 0.4; point (alpha 1) and the sign-symmetrized
///      subspace prior for V = span(1, 1, 1, 1) (alpha 1/2).
///   4: d = 4, direction (1, 1, 1, 100) / 20; point (alpha 1), coordinate
///      subspaces {1, 2, 3} and {1, 2, 4} and their leave-one-out mix
///      (alpha 1/2).
ExperimentDesign experiment_design(int id);

/// k log-spaced points from a to b inclusive.
std::vector<double> log_grid(double a, double b, std::size_t k);

/// 20 log-spaced points in [0.1, 10].
std::vector<double> default_lambda_grid();

struct ExperimentRow {
  double Lambda = 0.0;
  std::string prior;
  double reduction = 0.0;
  double se = 0.0;
};

struct ExperimentTable {
  int id = 0;
  std::vector<double> grid;
  std::vector<ExperimentRow> rows;  // sorted by (Lambda, prior)
  ExperimentDesign design;
  std::size_t n = 0;
  std::size_t inner_n = 0;
  std::uint64_t seed = 0;
};

/// Grid point j uses outer seed mix_seed(options.seed, j) for every prior.
ExperimentTable run_experiment(int id, const std::vector<double>& grid,
                               const ReductionOptions& options);

/// Same, for a caller-supplied design.
ExperimentTable run_design(const ExperimentDesign& design, const std::vector<double>& grid,
                           const ReductionOptions& options);

/// CSV with header Lambda,prior,reduction,se,log_reduction. The log column
/// holds the natural log, NaN for non-positive reductions.
std::string plot_data_csv(const ExperimentTable& table);
void emit_plot_data(const ExperimentTable& table, const std::string& path);

/// Settings, grid and prior definitions of a run.
std::string experiment_sidecar_json(const ExperimentTable& table);

struct Metrics {
  double kl_dist = 0.0;
  double ws_dist = 0.0;
  double loglik = 0.0;
  double loglik_se = 0.0;
  bool kl_infinite = false;
};

/// kl_dist = sum (yhat - y - y (log yhat - log y)) with 0 log 0 = 0;
/// ws_dist = sum (yhat - y)^2 / (y + 1). loglik is left at 0.
Metrics distance_metrics(std::span<const double> y_hat, const CountVector& y);

/// Distances of the predictive mean from y plus log p(y | x).
Metrics eval_metrics(const CountVector& x, const CountVector& y, const PriorSpec& prior,
                     const ProblemSpec& spec, const MonteCarloSettings& settings = {});

}  // namespace poshrink
