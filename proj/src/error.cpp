#include "factorcp/error.hpp"

namespace fcp {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyPanel: return "EmptyPanel";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::FullSpace: return "FullSpace";
    case ErrorKind::EmptySum: return "EmptySum";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::InvalidK: return "InvalidK";
    case ErrorKind::GridEmpty: return "GridEmpty";
    case ErrorKind::WindowTooShort: return "WindowTooShort";
    case ErrorKind::DegenerateNormalizer: return "DegenerateNormalizer";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
  }
  return "Unknown";
}

}  // namespace fcp
