// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "poshrink/core.hpp"

namespace poshrink {

// Shrinkage factors f(theta) on theta-space, theta_i = sqrt(lambda_i / gamma_i).
// The prior is pi(lambda) ~ f(theta) prod lambda_i^(beta_i - 1).

struct ConstantFamily {};

/// (|theta|^2 + eta)^(-alpha)
struct ShiftPointFamily {
  double alpha = 0.0;
  double eta = 0.0;
};

/// sum over sign vectors a of (|a*theta - center|^2 + eps)^(-alpha)
struct SymPointFamily {
  double alpha = 0.0;
  std::vector<double> center;
};

/// (|theta - center|^2 + eps)^(-alpha), no sign symmetrization. Superharmonic
/// for small alpha but not a dominating prior on its own.
struct PointFamily {
  double alpha = 0.0;
  std::vector<double> center;
};

/// sum over sign vectors a of (s_V(a*theta) + eps)^(-alpha), where
/// s_V(theta) = sum_j <theta, v_j>^2 over an orthonormal basis of V-perp.
struct SymSubspaceFamily {
  double alpha = 0.0;
  std::vector<std::vector<double>> vperp;
};

/// (sum_{i in S} theta_i^2 + eps)^(-alpha); indices are zero-based.
struct CoordSubspaceFamily {
  double alpha = 0.0;
  std::vector<std::size_t> indices;
};

struct Family;

struct SumFamily {
  std::vector<Family> parts;
};

struct Family {
  std::variant<ConstantFamily, ShiftPointFamily, SymPointFamily, PointFamily,
               SymSubspaceFamily, CoordSubspaceFamily, SumFamily>
      kind;
};

/// Largest d for which the 2^d sign sum is enumerated.
inline constexpr std::size_t max_symmetrized_dim = 25;

class FPrior {
 public:
  /// Structural validation only (dimensions, alpha > 0, orthonormal bases).
  /// Use validate_hypotheses() to also enforce the dominance conditions.
  FPrior(Family family, std::vector<double> beta, double epsilon = 0.0);

  const Family& family() const noexcept { return family_; }
  std::span<const double> beta() const noexcept { return beta_; }
  double beta(std::size_t i) const { return beta_.at(i); }
  double epsilon() const noexcept { return epsilon_; }
  std::size_t dim() const noexcept { return beta_.size(); }

  /// Same prior with a different smoothing constant.
  FPrior with_epsilon(double epsilon) const;

  /// Canonical grammar text; equal priors describe identically.
  std::string describe() const;
  std::uint64_t fingerprint() const;

  bool jeffreys_beta() const noexcept;

 private:
  Family family_;
  std::vector<double> beta_;
  double epsilon_;
};

struct PowerPrior {
  std::vector<double> beta;
};

struct GammaPrior {
  std::vector<double> alpha;
  std::vector<double> beta;
};

using PriorSpec = std::variant<PowerPrior, GammaPrior, FPrior>;

std::string describe(const PriorSpec& prior);
std::size_t prior_dim(const PriorSpec& prior);
std::vector<double> prior_beta(const PriorSpec& prior);

/// Hypothesis violations of the matching dominance result; empty when the
/// prior satisfies them. Messages name the bound that failed.
std::vector<std::string> hypothesis_violations(const FPrior& prior);

/// Throws invalid_argument listing every violation.
void validate_hypotheses(const FPrior& prior);

/// Orthonormal basis of the complement of span(vectors) in R^d.
std::vector<std::vector<double>> orthogonal_complement(
    const std::vector<std::vector<double>>& vectors, std::size_t d);

// --- pointwise evaluation ---------------------------------------------------

/// log f(theta); +inf only on the singular set of an unsmoothed family.
double eval_log_f(const FPrior& prior, const ThetaPoint& theta);

/// log f at an arbitrary point of R^d (families are defined off the orthant).
double eval_log_f_raw(const FPrior& prior, std::span<const double> theta);

/// log h for the unsymmetrized base of a family: the sign sum is dropped
/// for SymPoint and SymSubspace, other families are their own base.
double eval_log_base(const FPrior& prior, std::span<const double> theta);

struct SymmetrizationCheck {
  double symmetrized = 0.0;  // sum over a of f(a * theta)
  double base = 0.0;         // f(theta)
  double ratio = 0.0;
};

SymmetrizationCheck symmetrize_check(const FPrior& prior,
                                     const ThetaPoint& theta);

// --- differential checks ----------------------------------------------------

enum class LaplacianTarget { prior, base };

/// Central-difference Laplacian of f (or of its base h), Richardson
/// extrapolated once. step <= 0 selects 1e-3 * max(|theta|, 1).
double laplacian_fd(const FPrior& prior, std::span<const double> theta,
                    double step = 0.0,
                    LaplacianTarget target = LaplacianTarget::prior);

enum class BoundarySign { nonpositive, positive, inconclusive };

struct BoundaryDerivative {
  std::vector<double> theta_i;  // grid approaching 0
  std::vector<double> values;   // theta_i^(2 beta_i - 1) * df/dtheta_i
  double limit = 0.0;
  BoundarySign sign = BoundarySign::inconclusive;
};

/// Approximates lim_{theta_i -> 0} theta_i^(2 beta_i - 1) df/dtheta_i with
/// the other coordinates fixed at theta_partial.
BoundaryDerivative boundary_derivative_fd(
    const FPrior& prior, std::size_t i, std::span<const double> theta_partial,
    std::span<const double> grid = {});

}  // namespace poshrink
