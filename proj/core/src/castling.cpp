#include "tnm/castling.hpp"

#include "tnm/error.hpp"

namespace tnm {
namespace {

void require_normalized(const Datum& datum) {
  validate(datum);
  if (!is_normalized(datum)) {
    throw Error(ErrorCode::kInvalidDatum, "datum must be normalized: " + to_string(datum));
  }
}

}  // namespace

ExactInt castling_base(const Datum& normalized) {
  ExactInt n = to_exact(normalized.m);
  for (std::size_t i = 0; i + 1 < normalized.dims.size(); ++i) n *= to_exact(normalized.dims[i]);
  return n;
}

CastlingRegime castling_regime(const Datum& normalized) {
  require_normalized(normalized);
  const ExactInt big_n = castling_base(normalized);
  const ExactInt largest = to_exact(normalized.dims.back());
  if (largest > big_n) return CastlingRegime::kAboveN;
  if (largest == big_n) return CastlingRegime::kEqualsN;
  if (2 * largest > big_n) return CastlingRegime::kCastlable;
  return CastlingRegime::kAtMostHalf;
}

Datum castle_step(const Datum& datum) {
  require_normalized(datum);
  const ExactInt big_n = castling_base(datum);
  const ExactInt largest = to_exact(datum.dims.back());
  if (big_n <= largest) {
    throw Error(ErrorCode::kNotCastlable, "N = " + to_decimal(big_n) + " <= d_k in " + to_string(datum));
  }
  // Below the castlable band N - d_k can outgrow a machine word.
  const ExactInt replaced = big_n - largest;
  if (!replaced.fits_ulong_p()) {
    throw Error(ErrorCode::kNotCastlable, "castled dimension exceeds 64 bits in " + to_string(datum));
  }
  Datum out = datum;
  out.dims.back() = replaced.get_ui();
  return normalize(out);
}

CastlingTrace reduce_to_minimal(const Datum& datum) {
  CastlingTrace trace;
  Datum current = normalize(datum);
  trace.steps.push_back(current);
  while (castling_regime(current) == CastlingRegime::kCastlable) {
    current = castle_step(current);
    trace.steps.push_back(current);
  }
  return trace;
}

bool castling_equivalent(const Datum& a, const Datum& b) {
  return reduce_to_minimal(a).minimal() == reduce_to_minimal(b).minimal();
}

}  // namespace tnm
