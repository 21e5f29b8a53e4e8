#pragma once

#include <stdexcept>
#include <string>

namespace psrm {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  no_convergence,
  domain,
  io,
  parse,
};

// Every failure in the core surfaces as this exception; the C API maps
// `code()` onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace psrm
