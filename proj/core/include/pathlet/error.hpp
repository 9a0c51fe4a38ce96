#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pathlet {

// Machine-readable failure categories. The CLI maps each to a distinct exit
// status, so the numeric values are part of the tool's interface.
enum class ErrorCode : int {
  kParse = 2,
  kValidation = 3,
  kMissingInput = 4,
  kIo = 5,
  kUsage = 6,
  kConfig = 7,
  kBudgetExceeded = 8,
  kLookup = 9,
  kIngestion = 10,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pathlet
