#pragma once

#include <vector>

#include "tnm/datum.hpp"

namespace tnm {

/// Data visited while castling the largest dimension down, starting from the
/// normalized input. All entries are normalized.
struct CastlingTrace {
  std::vector<Datum> steps;

  const Datum& minimal() const { return steps.back(); }
  std::size_t length() const { return steps.size() - 1; }
};

/// Where the largest dimension d_k of a normalized datum sits relative to
/// N = m * d_1 * ... * d_{k-1}.
enum class CastlingRegime {
  kAboveN,      ///< d_k > N
  kEqualsN,     ///< d_k = N
  kCastlable,   ///< N/2 < d_k < N
  kAtMostHalf,  ///< 2 d_k <= N
};

/// N = m * d_1 * ... * d_{k-1} for a normalized datum.
ExactInt castling_base(const Datum& normalized);

CastlingRegime castling_regime(const Datum& normalized);

/// Replaces the largest dimension d_k by N - d_k and renormalizes.
/// Requires a normalized datum; throws kNotCastlable when N <= d_k.
Datum castle_step(const Datum& datum);

/// Castles while N/2 < d_k < N. The product of dimensions strictly decreases
/// along the way.
CastlingTrace reduce_to_minimal(const Datum& datum);

bool castling_equivalent(const Datum& a, const Datum& b);

}  // namespace tnm
