#include "fliplab/error.hpp"

namespace fliplab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kNonNumericFeature: return "NonNumericFeature";
    case ErrorCode::kNegativeFeature: return "NegativeFeature";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kEmptyClass: return "EmptyClass";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kInvalidRate: return "InvalidRate";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kPlanMismatch: return "PlanMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmpty: return "Empty";
    case ErrorCode::kNonStochasticRow: return "NonStochasticRow";
    case ErrorCode::kEmptyBackground: return "EmptyBackground";
    case ErrorCode::kEmptyResults: return "EmptyResults";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace fliplab
