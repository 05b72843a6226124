#pragma once

#include <stdexcept>
#include <string>

namespace entroflow {

/// Failure categories surfaced by the library.  Every thrown error carries one
/// of these codes so callers (and the CLI) can map failures to exit behavior
/// without parsing messages.
enum class ErrorCode {
  invalid_discretization,
  invalid_dimension,
  assembly,
  spectral,
  flow,
  kernel_truncation,
  degenerate_density,
  nonpositive_omega,
  normalization,
  unsupported_topology,
  config,
  io,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace entroflow
