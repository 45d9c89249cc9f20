#pragma once

#include <stdexcept>
#include <string>

namespace fixcert {

/// Error categories surfaced by the library. The CLI maps these onto its
/// exit-code contract; tests match on them to pin refusal behaviour.
enum class ErrorCode {
  domain,                   ///< argument outside the documented domain
  format,                   ///< malformed input data (shape, negative entries)
  invariant,                ///< internal consistency broken (stale tracked pair)
  control,                  ///< control function left [0,1)
  hypothesis,               ///< declared hypothesis contradicted by samples
  state,                    ///< operation not available in the current state
  window,                   ///< ratio window not yet defined at this index
  degenerate_step,          ///< ratio denominator is an exactly-zero step
  rectangular_unsupported,  ///< tail bounds are not derived for rectangular metrics
  io,                       ///< file could not be read or written
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

const char* error_code_name(ErrorCode code);

}  // namespace fixcert
