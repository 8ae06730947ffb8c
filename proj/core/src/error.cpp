#include "tnm/error.hpp"

#include "tnm/exact.hpp"

namespace tnm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDatum: return "InvalidDatum";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTrivialFactor: return "TrivialFactor";
    case ErrorCode::kNotCastlable: return "NotCastlable";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kDegenerateStatistic: return "DegenerateStatistic";
    case ErrorCode::kDeskScaleExceeded: return "DeskScaleExceeded";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

ExactInt parse_exact(const std::string& text) {
  std::size_t start = (!text.empty() && text.front() == '-') ? 1 : 0;
  if (text.size() == start) throw Error(ErrorCode::kParse, "empty integer literal");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw Error(ErrorCode::kParse, "not a decimal integer: '" + text + "'");
    }
  }
  return ExactInt(text, 10);
}

}  // namespace tnm
