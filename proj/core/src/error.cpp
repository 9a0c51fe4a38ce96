#include "pathlet/error.hpp"

namespace pathlet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kValidation: return "validation_error";
    case ErrorCode::kMissingInput: return "missing_input";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kUsage: return "usage_error";
    case ErrorCode::kConfig: return "config_error";
    case ErrorCode::kBudgetExceeded: return "budget_exceeded";
    case ErrorCode::kLookup: return "lookup_error";
    case ErrorCode::kIngestion: return "ingestion_error";
  }
  return "unknown_error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

}  // namespace pathlet
