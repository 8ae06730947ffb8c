#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tnm/exact.hpp"

namespace tnm {

/// Largest number of factors accepted by the inclusion-exclusion routines
/// (they enumerate all 2^k - 1 subsets).
inline constexpr std::size_t kMaxFactors = 16;

using Dims = std::vector<std::uint64_t>;

/// A tensor normal model (d_1, ..., d_k) together with a sample count m.
struct Datum {
  Dims dims;
  std::uint64_t m = 1;

  /// n = d_1 * ... * d_k.
  ExactInt dimension() const;

  friend bool operator==(const Datum&, const Datum&) = default;
};

/// "(d_1,...,d_k;m)".
std::string to_string(const Datum& datum);

/// Throws Error(kInvalidDatum) unless k >= 1, every d_i >= 1 and m >= 1.
void validate(const Datum& datum);

/// Sorts ascending and drops unit dimensions; an all-ones list becomes (1).
Datum normalize(const Datum& datum);

bool is_normalized(const Datum& datum);

/// m * prod d_i + sum_{n=1}^k (-1)^n sum_{|S|=n} gcd(d_S)^2.
ExactInt big_r(const Datum& datum);

/// m * prod d_i - 1 - sum (d_i^2 - 1).
ExactInt delta(const Datum& datum);

/// Largest pairwise gcd; 1 when the normalized datum has a single factor.
ExactInt g_max(const Datum& datum);

/// Inclusion-exclusion sum_n (-1)^{n+1} sum_{|S|=n} gcd(values_S); equals the
/// number of rationals in [0,1) whose reduced denominator divides some entry.
/// Throws kEmptyInput on an empty list and kInvalidDatum on zero entries or
/// more than kMaxFactors entries.
ExactInt z_quantity(std::span<const ExactInt> values);
ExactInt z_quantity(std::span<const std::uint64_t> values);

/// Index of the representation with respect to SL_{d_i}, m * n / (2 d_i^2).
/// `factor` is zero-based. Throws kTrivialFactor when d_i = 1 and
/// kInvalidDatum when factor is out of range.
ExactRational index_of_factor(const Datum& datum, std::size_t factor);

}  // namespace tnm
