// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holoshot {

enum class ErrorCode {
  kInvalidOrder,
  kInvalidMask,
  kShape,
  kConfiguration,
  kZeroInLattice,
  kSingularPoint,
  kInvalidWave,
  kDegeneratePoint,
  kInconsistentRecords,
  kInadmissible,
  kUnknownTarget,
  kParse,
  kIo,
};

/// Stable, machine-readable name for an error code (used in CLI output).
inline std::string_view reason(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidOrder:
      return "invalid-order";
    case ErrorCode::kInvalidMask:
      return "invalid-mask";
    case ErrorCode::kShape:
      return "shape";
    case ErrorCode::kConfiguration:
      return "configuration";
    case ErrorCode::kZeroInLattice:
      return "zero-in-lattice";
    case ErrorCode::kSingularPoint:
      return "singular-point";
    case ErrorCode::kInvalidWave:
      return "invalid-wave";
    case ErrorCode::kDegeneratePoint:
      return "degenerate-point";
    case ErrorCode::kInconsistentRecords:
      return "inconsistent-records";
    case ErrorCode::kInadmissible:
      return "inadmissible";
    case ErrorCode::kUnknownTarget:
      return "unknown-target";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace holoshot
