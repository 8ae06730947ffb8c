#include "tnm/datum.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "tnm/error.hpp"

namespace tnm {
namespace {

// Signed inclusion-exclusion over all nonempty subsets. gcds[mask] is built
// from gcds[mask without its lowest bit], so each subset costs one gcd.
template <typename Term>
ExactInt alternating_subset_sum(std::span<const ExactInt> values, Term term) {
  const std::size_t k = values.size();
  const std::size_t subsets = std::size_t{1} << k;
  std::vector<ExactInt> gcds(subsets);
  ExactInt total = 0;
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    const std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
    const std::size_t rest = mask & (mask - 1);
    if (rest == 0) {
      gcds[mask] = values[low];
    } else {
      mpz_gcd(gcds[mask].get_mpz_t(), gcds[rest].get_mpz_t(), values[low].get_mpz_t());
    }
    // Subsets of odd size enter with +, even size with -.
    if (std::popcount(mask) % 2 == 1) {
      total += term(gcds[mask]);
    } else {
      total -= term(gcds[mask]);
    }
  }
  return total;
}

std::vector<ExactInt> as_exact(std::span<const std::uint64_t> values) {
  std::vector<ExactInt> out;
  out.reserve(values.size());
  for (auto v : values) out.push_back(to_exact(v));
  return out;
}

void check_factor_count(std::size_t k) {
  if (k > kMaxFactors) {
    throw Error(ErrorCode::kInvalidDatum,
                "at most " + std::to_string(kMaxFactors) + " factors supported, got " +
                    std::to_string(k));
  }
}

}  // namespace

ExactInt Datum::dimension() const {
  ExactInt n = 1;
  for (auto d : dims) n *= to_exact(d);
  return n;
}

std::string to_string(const Datum& datum) {
  std::string out = "(";
  for (std::size_t i = 0; i < datum.dims.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(datum.dims[i]);
  }
  out += ';';
  out += std::to_string(datum.m);
  out += ')';
  return out;
}

void validate(const Datum& datum) {
  if (datum.dims.empty()) throw Error(ErrorCode::kInvalidDatum, "dimension list is empty");
  if (datum.m < 1) throw Error(ErrorCode::kInvalidDatum, "sample count must be >= 1");
  for (auto d : datum.dims) {
    if (d < 1) throw Error(ErrorCode::kInvalidDatum, "dimensions must be >= 1 in " + to_string(datum));
  }
}

Datum normalize(const Datum& datum) {
  validate(datum);
  Datum out{{}, datum.m};
  std::copy_if(datum.dims.begin(), datum.dims.end(), std::back_inserter(out.dims),
               [](std::uint64_t d) { return d != 1; });
  std::sort(out.dims.begin(), out.dims.end());
  if (out.dims.empty()) out.dims.push_back(1);
  return out;
}

bool is_normalized(const Datum& datum) {
  if (datum.dims.empty() || datum.m < 1) return false;
  if (datum.dims.size() == 1) return datum.dims.front() >= 1;
  return std::is_sorted(datum.dims.begin(), datum.dims.end()) && datum.dims.front() >= 2;
}

ExactInt big_r(const Datum& datum) {
  validate(datum);
  check_factor_count(datum.dims.size());
  const auto values = as_exact(datum.dims);
  // The inclusion-exclusion sum carries sign (-1)^n, the opposite of the one
  // used by alternating_subset_sum.
  return to_exact(datum.m) * datum.dimension() -
         alternating_subset_sum(values, [](const ExactInt& g) { return ExactInt(g * g); });
}

ExactInt delta(const Datum& datum) {
  validate(datum);
  ExactInt out = to_exact(datum.m) * datum.dimension() - 1;
  for (auto d : datum.dims) {
    const ExactInt e = to_exact(d);
    out -= e * e - 1;
  }
  return out;
}

ExactInt g_max(const Datum& datum) {
  validate(datum);
  std::uint64_t best = 1;
  for (std::size_t i = 0; i < datum.dims.size(); ++i) {
    for (std::size_t j = i + 1; j < datum.dims.size(); ++j) {
      best = std::max(best, std::gcd(datum.dims[i], datum.dims[j]));
    }
  }
  return to_exact(best);
}

ExactInt z_quantity(std::span<const ExactInt> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "z_quantity needs at least one value");
  check_factor_count(values.size());
  for (const auto& v : values) {
    if (v < 1) throw Error(ErrorCode::kInvalidDatum, "z_quantity entries must be >= 1");
  }
  return alternating_subset_sum(values, [](const ExactInt& g) { return g; });
}

ExactInt z_quantity(std::span<const std::uint64_t> values) {
  const auto exact = as_exact(values);
  return z_quantity(std::span<const ExactInt>(exact));
}

ExactRational index_of_factor(const Datum& datum, std::size_t factor) {
  validate(datum);
  if (factor >= datum.dims.size()) {
    throw Error(ErrorCode::kInvalidDatum, "factor position " + std::to_string(factor + 1) +
                                              " out of range for " + to_string(datum));
  }
  const std::uint64_t d = datum.dims[factor];
  if (d == 1) {
    throw Error(ErrorCode::kTrivialFactor,
                "factor " + std::to_string(factor + 1) + " has dimension 1 in " + to_string(datum));
  }
  const ExactInt de = to_exact(d);
  ExactRational out(to_exact(datum.m) * datum.dimension(), 2 * de * de);
  out.canonicalize();
  return out;
}

}  // namespace tnm
