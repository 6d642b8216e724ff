#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holo {

enum class ErrorCode {
  ShapeMismatch,
  InvalidGeometry,
  DegeneratePlan,
  PlanMismatch,
  OracleTooLarge,
  ImageTooSmall,
  BadMagic,
  UnsupportedVersion,
  TruncatedPayload,
  IoFailure,
  MissingSidecar,
  UnsupportedFormat,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace holo
