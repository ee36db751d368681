#include "gmrbm/error.hpp"

namespace gmrbm {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::too_large: return "too_large";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::unsupported_version: return "unsupported_version";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::schema_error: return "schema_error";
  }
  return "unknown";
}

}  // namespace gmrbm
