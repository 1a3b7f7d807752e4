// SPDX-License-Identifier: Apache-2.0
#include "poshrink/theta_priors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "poshrink/closed_form.hpp"

namespace poshrink {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_numbers(std::span<const double> values, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += format_number(values[i]);
  }
  return out;
}

void check_alpha(double alpha, const char* family) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    fail(ErrorCode::invalid_argument,
         std::string(family) + ": alpha must be positive and finite");
  }
}

bool needs_sign_sum(const Family& family) {
  return std::holds_alternative<SymPointFamily>(family.kind) ||
         std::holds_alternative<SymSubspaceFamily>(family.kind);
}

void validate_family(const Family& family, std::size_t d) {
  std::visit(
      overloaded{
          [](const ConstantFamily&) {},
          [](const ShiftPointFamily& f) {
            check_alpha(f.alpha, "shift-point");
            if (!(f.eta >= 0.0) || !std::isfinite(f.eta)) {
              fail(ErrorCode::invalid_argument,
                   "shift-point: eta must be nonnegative");
            }
          },
          [d](const SymPointFamily& f) {
            check_alpha(f.alpha, "sym-point");
            if (f.center.size() != d) {
              fail(ErrorCode::invalid_argument,
                   "sym-point: center must have " + std::to_string(d) +
                       " entries");
            }
          },
          [d](const PointFamily& f) {
            check_alpha(f.alpha, "point");
            if (f.center.size() != d) {
              fail(ErrorCode::invalid_argument,
                   "point: center must have " + std::to_string(d) + " entries");
            }
          },
          [d](const SymSubspaceFamily& f) {
            check_alpha(f.alpha, "sym-subspace");
            if (f.vperp.empty() || f.vperp.size() > d) {
              fail(ErrorCode::invalid_argument,
                   "sym-subspace: V-perp basis needs between 1 and d vectors");
            }
            for (const auto& v : f.vperp) {
              if (v.size() != d) {
                fail(ErrorCode::invalid_argument,
                     "sym-subspace: basis vectors must have " +
                         std::to_string(d) + " entries");
              }
            }
            for (std::size_t a = 0; a < f.vperp.size(); ++a) {
              for (std::size_t b = a; b < f.vperp.size(); ++b) {
                double dot = 0.0;
                for (std::size_t i = 0; i < d; ++i) dot += f.vperp[a][i] * f.vperp[b][i];
                if (std::abs(dot - (a == b ? 1.0 : 0.0)) > 1e-10) {
                  fail(ErrorCode::invalid_argument,
                       "sym-subspace: V-perp basis is not orthonormal to 1e-10");
                }
              }
            }
          },
          [d](const CoordSubspaceFamily& f) {
            check_alpha(f.alpha, "coord-subspace");
            if (f.indices.empty()) {
              fail(ErrorCode::invalid_argument,
                   "coord-subspace: index set must be nonempty");
            }
            std::set<std::size_t> seen;
            for (std::size_t i : f.indices) {
              if (i >= d) {
                fail(ErrorCode::invalid_argument,
                     "coord-subspace: index " + std::to_string(i + 1) +
                         " exceeds dimension " + std::to_string(d));
              }
              if (!seen.insert(i).second) {
                fail(ErrorCode::invalid_argument,
                     "coord-subspace: duplicate index " + std::to_string(i + 1));
              }
            }
          },
          [d](const SumFamily& f) {
            if (f.parts.empty()) {
              fail(ErrorCode::invalid_argument, "sum: needs at least one part");
            }
            for (const auto& part : f.parts) validate_family(part, d);
          },
      },
      family.kind);

  if (needs_sign_sum(family) && d > max_symmetrized_dim) {
    fail(ErrorCode::unsupported_dimension,
         "sign-symmetrized families enumerate 2^d terms and are limited to d <= " +
             std::to_string(max_symmetrized_dim) +
             "; use coord-subspace or shift-point forms, which are already "
             "sign-symmetric");
  }
}

// -alpha * log(q) with the convention q == 0 -> +inf.
inline double log_power(double q, double alpha) {
  if (q <= 0.0) return inf;
  return -alpha * std::log(q);
}

double squared_norm(std::span<const double> theta) {
  double s = 0.0;
  for (double t : theta) s += t * t;
  return s;
}

double point_log(std::span<const double> theta, std::span<const double> center,
                 double alpha, double eps, std::uint64_t signs) {
  double q = eps;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double t = (signs >> i & 1U) ? -theta[i] : theta[i];
    const double diff = t - center[i];
    q += diff * diff;
  }
  return log_power(q, alpha);
}

double subspace_log(std::span<const double> theta,
                    const std::vector<std::vector<double>>& vperp, double alpha,
                    double eps, std::uint64_t signs) {
  double q = eps;
  for (const auto& v : vperp) {
    double dot = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      dot += ((signs >> i & 1U) ? -theta[i] : theta[i]) * v[i];
    }
    q += dot * dot;
  }
  return log_power(q, alpha);
}

std::vector<double> magnitudes(std::span<const double> theta) {
  std::vector<double> out(theta.begin(), theta.end());
  for (double& v : out) v = std::abs(v);
  return out;
}

// Log-sum-exp accumulator that tolerates +inf terms.
class LogAccumulator {
 public:
  void add(double v) {
    if (v == inf) {
      infinite_ = true;
      return;
    }
    if (v == -inf) return;
    if (v <= max_) {
      sum_ += std::exp(v - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - v) + 1.0;
      max_ = v;
    }
  }
  double value() const {
    if (infinite_) return inf;
    if (max_ == -inf) return -inf;
    return max_ + std::log(sum_);
  }

 private:
  double max_ = -inf;
  double sum_ = 0.0;
  bool infinite_ = false;
};

double family_log(const Family& family, std::span<const double> theta,
                  double eps, bool base_only) {
  const std::size_t d = theta.size();
  return std::visit(
      overloaded{
          [](const ConstantFamily&) { return 0.0; },
          [&](const ShiftPointFamily& f) {
            return log_power(squared_norm(theta) + f.eta, f.alpha);
          },
          [&](const SymPointFamily& f) {
            if (base_only) return point_log(theta, f.center, f.alpha, eps, 0);
            // Summing over |theta| fixes the term order, so f(theta) == f(|theta|) bitwise.
            const std::vector<double> mag = magnitudes(theta);
            LogAccumulator acc;
            const std::uint64_t n = std::uint64_t{1} << d;
            for (std::uint64_t a = 0; a < n; ++a) {
              acc.add(point_log(mag, f.center, f.alpha, eps, a));
            }
            return acc.value();
          },
          [&](const PointFamily& f) {
            return point_log(theta, f.center, f.alpha, eps, 0);
          },
          [&](const SymSubspaceFamily& f) {
            if (base_only) return subspace_log(theta, f.vperp, f.alpha, eps, 0);
            const std::vector<double> mag = magnitudes(theta);
            LogAccumulator acc;
            const std::uint64_t n = std::uint64_t{1} << d;
            for (std::uint64_t a = 0; a < n; ++a) {
              acc.add(subspace_log(mag, f.vperp, f.alpha, eps, a));
            }
            return acc.value();
          },
          [&](const CoordSubspaceFamily& f) {
            double q = eps;
            for (std::size_t i : f.indices) q += theta[i] * theta[i];
            return log_power(q, f.alpha);
          },
          [&](const SumFamily& f) {
            LogAccumulator acc;
            for (const auto& part : f.parts) {
              acc.add(family_log(part, theta, eps, base_only));
            }
            return acc.value();
          },
      },
      family.kind);
}

std::string describe_family(const Family& family) {
  return std::visit(
      overloaded{
          [](const ConstantFamily&) { return std::string("constant"); },
          [](const ShiftPointFamily& f) {
            return "shift-point:alpha=" + format_number(f.alpha) +
                   ",eta=" + format_number(f.eta);
          },
          [](const SymPointFamily& f) {
            return "sym-point:alpha=" + format_number(f.alpha) +
                   ",center=" + join_numbers(f.center);
          },
          [](const PointFamily& f) {
            return "point:alpha=" + format_number(f.alpha) +
                   ",center=" + join_numbers(f.center);
          },
          [](const SymSubspaceFamily& f) {
            std::string out = "sym-subspace:alpha=" + format_number(f.alpha) + ",vperp=";
            for (std::size_t j = 0; j < f.vperp.size(); ++j) {
              if (j) out += "|";
              out += join_numbers(f.vperp[j]);
            }
            return out;
          },
          [](const CoordSubspaceFamily& f) {
            std::string out = "coord-subspace:alpha=" + format_number(f.alpha) + ",include=";
            for (std::size_t j = 0; j < f.indices.size(); ++j) {
              if (j) out += ",";
              out += std::to_string(f.indices[j] + 1);
            }
            return out;
          },
          [](const SumFamily& f) {
            std::string out = "sum:";
            for (std::size_t j = 0; j < f.parts.size(); ++j) {
              if (j) out += "+";
              out += "(" + describe_family(f.parts[j]) + ")";
            }
            return out;
          },
      },
      family.kind);
}

void collect_violations(const Family& family, const FPrior& prior,
                        std::vector<std::string>& out) {
  const std::size_t d = prior.dim();
  const double dd = static_cast<double>(d);
  auto require_jeffreys = [&](const char* name, const char* prop) {
    if (!prior.jeffreys_beta()) {
      out.push_back(std::string(name) + " requires beta = 1/2 in every coordinate (" +
                    prop + ")");
    }
  };
  std::visit(
      overloaded{
          [&](const ConstantFamily&) {},
          [&](const ShiftPointFamily& f) {
            double beta_sum = 0.0;
            for (double b : prior.beta()) beta_sum += b;
            if (f.alpha > beta_sum - 1.0 + 1e-12) {
              out.push_back("alpha exceeds sum(beta) - 1 = " +
                            format_number(beta_sum - 1.0) + ", Proposition 1");
            }
          },
          [&](const SymPointFamily& f) {
            require_jeffreys("sym-point", "Proposition 2");
            if (f.alpha > (dd - 2.0) / 2.0 + 1e-12) {
              out.push_back("alpha exceeds (d-2)/2 = " +
                            format_number((dd - 2.0) / 2.0) + ", Proposition 2");
            }
            for (double c : f.center) {
              if (c < 0.0) {
                out.push_back("sym-point center entries must be nonnegative");
                break;
              }
            }
          },
          [&](const PointFamily&) {
            out.push_back(
                "point (unsymmetrized) priors are not covered by any dominance "
                "result; symmetrize over sign vectors (sym-point)");
          },
          [&](const SymSubspaceFamily& f) {
            require_jeffreys("sym-subspace", "Proposition 3");
            const double k = dd - static_cast<double>(f.vperp.size());
            if (f.alpha > (dd - k - 2.0) / 2.0 + 1e-12) {
              out.push_back("alpha exceeds (d-k-2)/2 = " +
                            format_number((dd - k - 2.0) / 2.0) + " with k = " +
                            format_number(k) + ", Proposition 3");
            }
          },
          [&](const CoordSubspaceFamily& f) {
            require_jeffreys("coord-subspace", "Proposition 3");
            const double k = dd - static_cast<double>(f.indices.size());
            if (f.alpha > (dd - k - 2.0) / 2.0 + 1e-12) {
              out.push_back("alpha exceeds (d-k-2)/2 = " +
                            format_number((dd - k - 2.0) / 2.0) + " with k = " +
                            format_number(k) + ", Proposition 3");
            }
          },
          [&](const SumFamily& f) {
            for (const auto& part : f.parts) collect_violations(part, prior, out);
          },
      },
      family.kind);
}

}  // namespace

FPrior::FPrior(Family family, std::vector<double> beta, double epsilon)
    : family_(std::move(family)), beta_(std::move(beta)), epsilon_(epsilon) {
  if (beta_.empty()) fail(ErrorCode::invalid_argument, "prior dimension must be >= 1");
  check_beta(beta_, beta_.size());
  if (!(epsilon_ >= 0.0) || !std::isfinite(epsilon_)) {
    fail(ErrorCode::invalid_argument, "smoothing eps must be nonnegative");
  }
  validate_family(family_, beta_.size());
}

FPrior FPrior::with_epsilon(double epsilon) const {
  return FPrior(family_, beta_, epsilon);
}

bool FPrior::jeffreys_beta() const noexcept {
  return std::all_of(beta_.begin(), beta_.end(), [](double b) { return b == 0.5; });
}

std::string FPrior::describe() const {
  std::string out = describe_family(family_);
  // Bare names such as "constant" take their options after a colon.
  auto separator = [&out] { return out.find(':') == std::string::npos ? ":" : ","; };
  if (!jeffreys_beta()) out += separator() + ("beta=" + join_numbers(beta_));
  if (epsilon_ != 0.0) out += separator() + ("eps=" + format_number(epsilon_));
  return out;
}

std::uint64_t FPrior::fingerprint() const {
  // FNV-1a over the canonical description.
  std::uint64_t h = 1469598103934665603ULL;
  const std::string text = describe() + "|d=" + std::to_string(dim());
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string describe(const PriorSpec& prior) {
  return std::visit(
      overloaded{
          [](const PowerPrior& p) {
            const bool jeffreys = std::all_of(p.beta.begin(), p.beta.end(),
                                              [](double b) { return b == 0.5; });
            if (jeffreys) return std::string("jeffreys");
            return "power:beta=" + join_numbers(p.beta);
          },
          [](const GammaPrior& p) {
            return "gamma:alpha=" + join_numbers(p.alpha) +
                   ",beta=" + join_numbers(p.beta);
          },
          [](const FPrior& p) { return p.describe(); },
      },
      prior);
}

std::size_t prior_dim(const PriorSpec& prior) {
  return std::visit(overloaded{[](const PowerPrior& p) { return p.beta.size(); },
                               [](const GammaPrior& p) { return p.beta.size(); },
                               [](const FPrior& p) { return p.dim(); }},
                    prior);
}

std::vector<double> prior_beta(const PriorSpec& prior) {
  return std::visit(
      overloaded{[](const PowerPrior& p) { return p.beta; },
                 [](const GammaPrior& p) { return p.beta; },
                 [](const FPrior& p) {
                   return std::vector<double>(p.beta().begin(), p.beta().end());
                 }},
      prior);
}

std::vector<std::string> hypothesis_violations(const FPrior& prior) {
  std::vector<std::string> out;
  collect_violations(prior.family(), prior, out);
  return out;
}

void validate_hypotheses(const FPrior& prior) {
  const auto violations = hypothesis_violations(prior);
  if (violations.empty()) return;
  std::string msg = violations.front();
  for (std::size_t i = 1; i < violations.size(); ++i) msg += "; " + violations[i];
  fail(ErrorCode::invalid_argument, msg);
}

std::vector<std::vector<double>> orthogonal_complement(
    const std::vector<std::vector<double>>& vectors, std::size_t d) {
  std::vector<std::vector<double>> basis;
  auto orthonormalize = [&](std::vector<double> v) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        double dot = 0.0;
        for (std::size_t i = 0; i < d; ++i) dot += v[i] * b[i];
        for (std::size_t i = 0; i < d; ++i) v[i] -= dot * b[i];
      }
    }
    const double norm = std::sqrt(squared_norm(v));
    if (norm < 1e-9) return false;
    for (double& x : v) x /= norm;
    basis.push_back(std::move(v));
    return true;
  };
  for (const auto& v : vectors) {
    if (v.size() != d) {
      fail(ErrorCode::invalid_argument, "subspace vectors must have d entries");
    }
    orthonormalize(v);
  }
  const std::size_t span_dim = basis.size();
  for (std::size_t j = 0; j < d && basis.size() < d; ++j) {
    std::vector<double> e(d, 0.0);
    e[j] = 1.0;
    orthonormalize(std::move(e));
  }
  return {basis.begin() + static_cast<std::ptrdiff_t>(span_dim), basis.end()};
}

double eval_log_f_raw(const FPrior& prior, std::span<const double> theta) {
  if (theta.size() != prior.dim()) {
    fail(ErrorCode::invalid_argument,
         "theta has length " + std::to_string(theta.size()) + ", prior has d = " +
             std::to_string(prior.dim()));
  }
  return family_log(prior.family(), theta, prior.epsilon(), false);
}

double eval_log_f(const FPrior& prior, const ThetaPoint& theta) {
  return eval_log_f_raw(prior, theta.values());
}

double eval_log_base(const FPrior& prior, std::span<const double> theta) {
  if (theta.size() != prior.dim()) {
    fail(ErrorCode::invalid_argument, "theta length does not match the prior");
  }
  return family_log(prior.family(), theta, prior.epsilon(), true);
}

SymmetrizationCheck symmetrize_check(const FPrior& prior,
                                     const ThetaPoint& theta) {
  const std::size_t d = prior.dim();
  if (d > max_symmetrized_dim) {
    fail(ErrorCode::unsupported_dimension, "sign sum limited to d <= 25");
  }
  std::vector<double> point(theta.values().begin(), theta.values().end());
  LogAccumulator acc;
  const std::uint64_t n = std::uint64_t{1} << d;
  for (std::uint64_t a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < d; ++i) {
      point[i] = (a >> i & 1U) ? -theta[i] : theta[i];
    }
    acc.add(eval_log_f_raw(prior, point));
  }
  SymmetrizationCheck out;
  out.symmetrized = std::exp(acc.value());
  out.base = std::exp(eval_log_f(prior, theta));
  out.ratio = out.symmetrized / out.base;
  return out;
}

namespace {

double value_at(const FPrior& prior, std::span<const double> theta,
                LaplacianTarget target) {
  const double lf = target == LaplacianTarget::base ? eval_log_base(prior, theta)
                                                    : eval_log_f_raw(prior, theta);
  if (!std::isfinite(lf)) {
    fail(ErrorCode::singularity,
         "f is singular at a finite-difference stencil point; use eps > 0 or "
         "move theta off the singular set");
  }
  return std::exp(lf);
}

double laplacian_once(const FPrior& prior, std::span<const double> theta,
                      double h, LaplacianTarget target) {
  std::vector<double> point(theta.begin(), theta.end());
  const double center = value_at(prior, point, target);
  double lap = 0.0;
  for (std::size_t i = 0; i < point.size(); ++i) {
    point[i] = theta[i] + h;
    const double up = value_at(prior, point, target);
    point[i] = theta[i] - h;
    const double down = value_at(prior, point, target);
    point[i] = theta[i];
    lap += (up - 2.0 * center + down) / (h * h);
  }
  return lap;
}

}  // namespace

double laplacian_fd(const FPrior& prior, std::span<const double> theta,
                    double step, LaplacianTarget target) {
  if (theta.size() != prior.dim()) {
    fail(ErrorCode::invalid_argument, "theta length does not match the prior");
  }
  if (step <= 0.0) step = 1e-3 * std::max(std::sqrt(squared_norm(theta)), 1.0);
  if (target == LaplacianTarget::prior) {
    for (double t : theta) {
      if (t < 2.0 * step) {
        fail(ErrorCode::invalid_argument,
             "laplacian_fd on the orthant needs theta_i >= 2 * step");
      }
    }
  }
  const double coarse = laplacian_once(prior, theta, step, target);
  const double fine = laplacian_once(prior, theta, 0.5 * step, target);
  return (4.0 * fine - coarse) / 3.0;
}

BoundaryDerivative boundary_derivative_fd(const FPrior& prior, std::size_t i,
                                          std::span<const double> theta_partial,
                                          std::span<const double> grid) {
  if (i >= prior.dim()) fail(ErrorCode::invalid_argument, "coordinate index out of range");
  if (theta_partial.size() != prior.dim()) {
    fail(ErrorCode::invalid_argument, "theta_partial length does not match the prior");
  }
  static constexpr double default_grid[] = {1e-2, 1e-3, 1e-4};
  if (grid.empty()) grid = default_grid;

  BoundaryDerivative out;
  std::vector<double> point(theta_partial.begin(), theta_partial.end());
  const double exponent = 2.0 * prior.beta(i) - 1.0;
  for (double g : grid) {
    if (!(g > 0.0)) fail(ErrorCode::invalid_argument, "boundary grid must be positive");
    const double h = g / 10.0;
    point[i] = g + h;
    const double up = value_at(prior, point, LaplacianTarget::prior);
    point[i] = g - h;
    const double down = value_at(prior, point, LaplacianTarget::prior);
    out.theta_i.push_back(g);
    out.values.push_back(std::pow(g, exponent) * (up - down) / (2.0 * h));
  }

  const std::size_t n = out.values.size();
  double scale = 0.0;
  for (double v : out.values) scale = std::max(scale, std::abs(v));
  if (n >= 2) {
    // Linear extrapolation in theta_i from the two points nearest the boundary.
    const double t1 = out.theta_i[n - 2], t2 = out.theta_i[n - 1];
    const double v1 = out.values[n - 2], v2 = out.values[n - 1];
    out.limit = v2 - t2 * (v1 - v2) / (t1 - t2);
  } else {
    out.limit = out.values.back();
  }
  const double zero_tol = 1e-3 * scale + 1e-300;
  if (std::abs(out.limit) <= zero_tol) {
    out.limit = 0.0;
    out.sign = BoundarySign::nonpositive;
  } else if (out.limit < 0.0 && out.values.back() <= 0.0) {
    out.sign = BoundarySign::nonpositive;
  } else if (out.limit > 0.0 && out.values.back() > 0.0) {
    out.sign = BoundarySign::positive;
  } else {
    out.sign = BoundarySign::inconclusive;
  }
  return out;
}

}  // namespace poshrink
