#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flowsep {

enum class Errc {
  BadMagic,
  BadDimensions,
  Truncated,
  NonFinite,
  DimensionMismatch,
  DegenerateFit,
  EmptyInput,
  ClipTooShort,
  MissingClass,
  EmptyDataset,
  NotOneHot,
  EmptyScores,
  LabelOutOfRange,
  LengthMismatch,
  EmptyMatrix,
  InvalidSpec,
  InvalidArgument,
  Io,
  Parse,
};

std::string_view to_string(Errc code);

// All library failures are reported with this exception; code() is stable,
// what() carries a human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace flowsep
