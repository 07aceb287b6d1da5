#pragma once

#include <stdexcept>
#include <string>

namespace antag {

enum class ErrorCode {
  invalid_spec,
  singular_diagonal,
  no_convergence,
  empty_spectrum,
  dimension_too_large,
  odd_dimension,
  degenerate_extremes,
  not_degenerate,
  zero_variance,
  invalid_argument,
  io_failure,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure reported by the library carries one of the codes above; the
/// CLI maps them to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace antag
