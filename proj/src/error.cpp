#include "scatspec/error.hpp"

namespace scatspec {

const char* error_code_name(ErrorCode code) {
  switch (code) {
  case ErrorCode::invalid_potential: return "invalid_potential";
  case ErrorCode::unknown_tag: return "unknown_tag";
  case ErrorCode::invalid_argument: return "invalid_argument";
  case ErrorCode::non_convergence: return "non_convergence";
  case ErrorCode::inconsistency: return "inconsistency";
  case ErrorCode::domain_error: return "domain_error";
  case ErrorCode::under_resolved: return "under_resolved";
  case ErrorCode::precondition: return "precondition";
  case ErrorCode::bad_multiplier: return "bad_multiplier";
  case ErrorCode::bad_config: return "bad_config";
  case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

} // namespace scatspec
