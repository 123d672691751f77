#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace kinemark {

enum class ErrorCode {
  MalformedLine,
  UnknownJointLabel,
  MissingJoint,
  DuplicateJoint,
  NonFiniteCoordinate,
  UnmappedJoint,
  TooFewFrames,
  BadSampleInterval,
  InconsistentMetadata,
  EmptyDefinitions,
  DegenerateTriangle,
  WindowTooLong,
  TooFewSamples,
  TooFewFeatures,
  ZeroVariance,
  ZeroVarianceOfDifferences,
  LengthMismatch,
  DegenerateMatrix,
  BadArgument,
  NoRecordings,
  NoPairedSessions,
  MissingAction,
  InvalidConfig,
  IoFailure,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a machine-checkable code plus an optional frame or
/// line index for errors tied to a position in a recording.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

  /// True for errors that should map to the I/O failure exit code.
  bool is_io() const noexcept { return code_ == ErrorCode::IoFailure; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace kinemark
