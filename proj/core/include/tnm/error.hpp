#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tnm {

enum class ErrorCode {
  kInvalidDatum,
  kEmptyInput,
  kTrivialFactor,
  kNotCastlable,
  kNotPositiveDefinite,
  kShapeMismatch,
  kDegenerateStatistic,
  kDeskScaleExceeded,
  kParse,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for every failure raised by the library; callers
/// branch on code() rather than on a class hierarchy.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tnm
