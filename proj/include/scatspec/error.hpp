#pragma once
//! Error taxonomy shared across modules.

#include <stdexcept>
#include <string>

namespace scatspec {

enum class ErrorCode {
  invalid_potential,
  unknown_tag,
  invalid_argument,
  non_convergence,
  inconsistency,
  domain_error,
  under_resolved,
  precondition,
  bad_multiplier,
  bad_config,
  io_error,
};

//! Stable string form used in machine-readable error output.
const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

} // namespace scatspec
