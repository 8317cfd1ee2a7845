#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iris {

enum class ErrorCode {
  EmptyInput,
  InvalidRun,
  DegenerateInput,
  Parameter,
  Shape,
  NoPupilIndicator,
  InvalidSeed,
  EmptyMask,
  NoIrisAnnulus,
  SegmentationFailure,
  DegenerateRing,
  IncomparableCodes,
  InsufficientData,
  Io,
  Format,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable error kind. Pipeline stages prepend
/// their stage name so failures read like "cfis/vote: no line reached 2 votes".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Same error kind, message prefixed with `stage`.
  Error annotated(std::string_view stage) const {
    return Error(code_, std::string(stage) + ": " + what());
  }

 private:
  ErrorCode code_;
};

}  // namespace iris
