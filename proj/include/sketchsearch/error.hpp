#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sketchsearch {

enum class ErrorCode {
  EmptyInput,
  OutOfBounds,
  DegenerateStroke,
  UntrainedClass,
  ParseError,
  MissingClass,
  UnknownLabel,
  UnknownClass,
  InvalidBBox,
  DuplicateId,
  EmptyCorpus,
  IoError,
  VersionMismatch,
  ChecksumMismatch,
  InvalidTile,
  EmptyIndex,
  TargetMissing,
  EmptyGrid,
  UnknownSession,
  UnknownScreen,
  EmptyStroke,
  NoPendingStrokes,
  InvalidN,
  InvalidArgument,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// that the CLI and HTTP layers can map it to an exit status or response.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace sketchsearch
