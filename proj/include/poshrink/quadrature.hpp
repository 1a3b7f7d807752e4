// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace poshrink {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

// Globally adaptive 7/15-point Gauss-Kronrod on a finite interval. The panel
// with the largest error estimate is bisected until the total error falls
// under max(abs_tol, rel_tol * |value|) or max_panels is reached.
QuadratureResult integrate_gauss_kronrod(const std::function<double(double)>& f,
                                         double lower, double upper,
                                         double rel_tol = 1e-10,
                                         double abs_tol = 0.0,
                                         std::size_t max_panels = 2000);

}  // namespace poshrink
