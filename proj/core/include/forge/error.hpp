#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace forge {

enum class ErrorCode {
  kMissingField,
  kEmptyField,
  kBadUrl,
  kEmptyInput,
  kProviderUnavailable,
  kSchemaViolation,
  kUnknownTemplate,
  kMissingBinding,
  kParseError,
  kDimensionMismatch,
  kIoError,
  kFormatVersionMismatch,
  kChecksumMismatch,
  kProviderMismatch,
  kServiceUnavailable,
  kDomainError,
  kInvalidRequest,
  kMissingInput,
  kConfigError,
  kInternal,
};

std::string_view to_string(ErrorCode code);

// All failures raised by the library carry a code so callers (the CLI exit
// status, the HTTP layer) can map them without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace forge
