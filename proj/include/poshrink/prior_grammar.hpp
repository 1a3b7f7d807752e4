// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "poshrink/theta_priors.hpp"

namespace poshrink {

// Prior mini-grammar:
//
//   jeffreys | constant
//   power:beta=B
//   gamma:alpha=A,beta=B
//   shift-point:alpha=A[,eta=E]
//   sym-point:alpha=A,center=c1,...,cd
//   point:alpha=A,center=c1,...,cd            (no sign symmetrization)
//   sym-subspace:alpha=A,vperp=@file | vperp=v11,...,v1d|v21,...
//   sym-subspace:alpha=A,v=...                (V given directly)
//   coord-subspace:alpha=A,include=i1,i2,...  (1-based)
//   mix-coord-subspace:alpha=A                (sum over leave-one-out sets)
//   sum:(family)+(family)+...
//
// Shrinkage families also take beta=B and eps=E (on the sum, not its
// parts). Vector values are comma separated; a single value is broadcast
// to all d coordinates. Basis files hold one vector per line.

/// Parses `text` for dimension d. Syntax errors carry ErrorCode::parse and
/// the character offset; with check_hypotheses, shrinkage priors outside
/// their dominance result are rejected with invalid_argument.
PriorSpec parse_prior(std::string_view text, std::size_t d,
                      bool check_hypotheses = true);

/// Splits "p1;p2;..." at top-level semicolons.
std::vector<std::string> split_prior_list(std::string_view text);

/// One vector per non-empty, non-comment line of a CSV file.
std::vector<std::vector<double>> read_basis_file(const std::string& path);

}  // namespace poshrink
