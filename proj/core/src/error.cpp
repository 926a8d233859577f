#include "forge/error.hpp"

namespace forge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kEmptyField: return "EmptyField";
    case ErrorCode::kBadUrl: return "BadUrl";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kUnknownTemplate: return "UnknownTemplate";
    case ErrorCode::kMissingBinding: return "MissingBinding";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kFormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::kProviderMismatch: return "ProviderMismatch";
    case ErrorCode::kServiceUnavailable: return "ServiceUnavailable";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kInvalidRequest: return "InvalidRequest";
    case ErrorCode::kMissingInput: return "MissingInput";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace forge
