#pragma once

#include <stdexcept>
#include <string>

namespace fcp {

enum class ErrorKind {
  IoError,
  ParseError,
  EmptyPanel,
  DimensionMismatch,
  NotOrthonormal,
  FullSpace,
  EmptySum,
  ConvergenceFailure,
  DegenerateSpectrum,
  InvalidK,
  GridEmpty,
  WindowTooShort,
  DegenerateNormalizer,
  InvalidParams,
  InvalidSpec,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every library failure is reported as an Error carrying its kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fcp
