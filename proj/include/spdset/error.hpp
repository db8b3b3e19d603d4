#pragma once

#include <stdexcept>
#include <string>

namespace spdset {

enum class ErrorCode {
  InvalidInput,
  DimMismatch,
  NotPositiveDefinite,
  Overflow,
  NumericalError,
  InvalidSpec,
  DegenerateSet,
  DegenerateRepresentation,
  DegenerateAlignment,
  IllConditioned,
  KernelNotPSD,
  ConvergenceFailure,
  EmptyDataset,
  InsufficientSets,
  FrameDecodeError,
  InvalidResult,
  InvalidConfig,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` tells callers what went
/// wrong without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures that originate in numerics rather than in user data.
  bool is_numerical() const noexcept;

 private:
  ErrorCode code_;
};

}  // namespace spdset
