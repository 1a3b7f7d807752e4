// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace poshrink::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_invalid = 2,
  exit_numerical = 3,
  exit_io = 4,
};

/// Failure raised inside the CLI layer with the exit code it maps to.
struct CliError {
  int exit_code;
  std::string message;
};

struct CountTable {
  std::vector<std::string> ids;
  std::vector<std::int64_t> x;
  std::optional<std::vector<std::int64_t>> y;
  std::size_t skipped_rows = 0;  // rows with an empty x field
};

/// Reads a CSV with header unit_id,x[,y]. Rows whose x field is empty are
/// skipped and counted; malformed rows and negative counts are rejected
/// with the line number.
CountTable ingest_counts(const std::string& path);

/// Comma-separated reals; throws CliError on bad input.
std::vector<double> parse_reals(const std::string& text, const std::string& flag);

/// Runs one command line (argv[0] is the program name) and returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace poshrink::cli
