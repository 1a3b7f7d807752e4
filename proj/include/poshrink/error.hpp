// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace poshrink {

enum class ErrorCode {
  invalid_argument,
  parse,
  unsupported_dimension,
  cost,
  domain,
  integrability,
  singularity,
  io,
};

// Every failure raised by the library carries one of the codes above. The C
// API and the CLI map codes onto status values / exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// Numerical failures (integrability, singularities, domain) are distinguished
// from bad input so callers can report them differently.
inline bool is_numerical(ErrorCode code) {
  return code == ErrorCode::domain || code == ErrorCode::integrability ||
         code == ErrorCode::singularity;
}

}  // namespace poshrink
