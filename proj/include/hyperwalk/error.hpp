#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hyperwalk {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  InvalidMeasure,
  BallEscape,
  GuardExceeded,
  BackendMismatch,
  BoundViolation,
  Unsupported,
  NotSmallCancellation,
};

const char* error_code_name(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library.
///
/// `subject` names the violated hypothesis or offending input when there is
/// one (e.g. "symmetric", "ball_radius"); it ends up in machine-readable error
/// reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string subject = {})
      : std::runtime_error(message), code_(code), subject_(std::move(subject)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace hyperwalk
