#include "antagonistic/error.hpp"

namespace antag {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_spec: return "invalid-spec";
    case ErrorCode::singular_diagonal: return "singular-D";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::empty_spectrum: return "empty-spectrum";
    case ErrorCode::dimension_too_large: return "dimension-too-large";
    case ErrorCode::odd_dimension: return "odd-n";
    case ErrorCode::degenerate_extremes: return "degenerate-extremes";
    case ErrorCode::not_degenerate: return "not-degenerate";
    case ErrorCode::zero_variance: return "zero-variance";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::io_failure: return "io-failure";
  }
  return "unknown";
}

}  // namespace antag
