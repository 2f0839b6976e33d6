#include "emx/types.hpp"

namespace emx {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::AllTruncated: return "AllTruncated";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegenerateDesign: return "DegenerateDesign";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace emx
