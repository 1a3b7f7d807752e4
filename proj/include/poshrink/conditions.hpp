// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "poshrink/core.hpp"
#include "poshrink/f_integral.hpp"
#include "poshrink/theta_priors.hpp"

namespace poshrink {

// Grid checks of the sufficient conditions for a shrinkage predictive to
// dominate the power-prior predictive. A pass is evidence on the grid only.

struct FineqPoint {
  CountVector z;
  std::vector<double> r;
  double lhs = 0.0;  // normalized by sum gamma_i r_i (z_i + beta_i) F(z, r)
  double std_error = 0.0;
};

struct FineqReport {
  std::string prior;
  std::vector<std::vector<double>> r_grid;
  int z_max = 0;
  std::size_t lattice_points = 0;  // z with |z| <= z_max, per r
  std::string backend;
  double tol_rel = 0.0;
  double min_lhs = 0.0;
  double min_threshold = 0.0;  // -(tol_rel + 5 se) at the minimizer
  CountVector argmin_z;
  std::vector<double> argmin_r;
  bool pass = false;
  std::vector<FineqPoint> points;  // sorted by (|z|, z), then grid order

  std::string to_json() const;
};

struct FineqOptions {
  double tol_rel = 1e-6;
  /// Samples per r for Monte Carlo-backed priors.
  std::size_t n = 20000;
  std::uint64_t seed = 20240601;
  double singular_eps = 1e-6;
};

/// Evaluates, for every z with |z| <= z_max and every r in r_grid,
/// sum_i gamma_i r_i z_i (F(z) - F(z - delta_i)) +
/// sum_i gamma_i r_i (z_i + beta_i) (F(z) - F(z + delta_i)),
/// normalized as described on FineqPoint. gamma comes from spec; r is the
/// grid variable. Points pass when lhs >= -(tol_rel + 5 se).
FineqReport check_fineq(const FPrior& prior, const ProblemSpec& spec,
                        const std::vector<std::vector<double>>& r_grid, int z_max,
                        const FineqOptions& options = {});

/// True iff F over |z| <= z_max varies by more than its combined error.
bool check_nonconstant_F(const FPrior& prior, const ProblemSpec& spec,
                         std::span<const double> r, int z_max,
                         const MonteCarloSettings& settings = {});

struct Certification {
  bool certified = false;
  std::string proposition;  // "Proposition 1" ... "Proposition 4", or empty
  std::vector<std::string> violations;
  std::vector<std::string> notes;
  /// Whether the shrinkage target contains a nonzero nonnegative point (the
  /// origin counts for point targets); unset when the check is inconclusive.
  std::optional<bool> target_in_orthant;

  std::string to_json() const;
};

/// Arithmetic check of the hypotheses of the matching dominance result.
Certification certify_builtin(const FPrior& prior);

/// Every lattice point z in N^d with |z| <= z_max, ordered by (|z|, z).
std::vector<CountVector> lattice_points(std::size_t d, int z_max);

}  // namespace poshrink
