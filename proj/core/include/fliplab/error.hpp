#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fliplab {

enum class ErrorCode {
  kMissingColumn,
  kUnknownLabel,
  kNonNumericFeature,
  kNegativeFeature,
  kInvalidSpec,
  kEmptyClass,
  kSchemaMismatch,
  kInvalidRate,
  kIndexOutOfRange,
  kPlanMismatch,
  kLengthMismatch,
  kEmpty,
  kNonStochasticRow,
  kEmptyBackground,
  kEmptyResults,
  kInvalidConfig,
  kIo,
  kParse,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported as fliplab::Error; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace fliplab
