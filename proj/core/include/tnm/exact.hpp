#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace tnm {

using ExactInt = mpz_class;
using ExactRational = mpq_class;

inline ExactInt to_exact(std::uint64_t v) {
  ExactInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

inline std::string to_decimal(const ExactInt& v) { return v.get_str(10); }

inline std::string to_decimal(const ExactRational& v) { return v.get_str(10); }

/// Parses a base-10 integer with optional leading '-'. Throws Error(kParse).
ExactInt parse_exact(const std::string& text);

/// Ceiling of num/den for den > 0.
inline ExactInt ceil_div(const ExactInt& num, const ExactInt& den) {
  ExactInt q;
  mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

}  // namespace tnm
