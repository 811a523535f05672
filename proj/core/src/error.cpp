#include "qms/error.hpp"

namespace qms {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateState: return "DuplicateState";
    case ErrorCode::MalformedEntry: return "MalformedEntry";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::EncodingError: return "EncodingError";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::NotErgodic: return "NotErgodic";
    case ErrorCode::NoSolutionSignal: return "NoSolutionSignal";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::NumericFailure: return "NumericFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace qms
