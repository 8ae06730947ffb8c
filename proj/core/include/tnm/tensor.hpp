#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tnm/datum.hpp"

namespace tnm {

/// m real tensors of shape d_1 x ... x d_k stored sample-major, then
/// row-major over (a_1, ..., a_k) with a_k fastest.
struct SampleSet {
  Dims dims;
  std::uint64_t m = 0;
  std::vector<double> data;

  std::size_t tensor_size() const;
  std::span<const double> sample(std::size_t s) const;
  std::span<double> sample(std::size_t s);

  friend bool operator==(const SampleSet&, const SampleSet&) = default;
};

/// Throws kShapeMismatch on a length mismatch and kInvalidDatum on
/// non-finite entries or invalid dims.
void validate(const SampleSet& samples);

/// Psi_1 (x) ... (x) Psi_k, kept factorized.
struct KroneckerPrecision {
  std::vector<Eigen::MatrixXd> factors;

  std::size_t order() const { return factors.size(); }
  Dims dims() const;
};

/// Throws kShapeMismatch for non-square factors and kNotPositiveDefinite when
/// a factor is asymmetric beyond 1e-12 relative or not positive definite.
void validate(const KroneckerPrecision& precision);

KroneckerPrecision identity_precision(const Dims& dims);

/// Product of the entries of dims as a machine size. Throws kShapeMismatch on
/// overflow.
std::size_t tensor_size(const Dims& dims);

/// out = (I (x) .. (x) A (x) .. (x) I) in, with A acting on mode `mode`.
/// `in` and `out` must not alias.
void mode_multiply(std::span<const double> in, std::span<double> out, const Dims& dims,
                   std::size_t mode, const Eigen::MatrixXd& a);

/// Applies every factor of `precision` mode by mode.
std::vector<double> apply_kronecker(std::span<const double> tensor, const Dims& dims,
                                    const KroneckerPrecision& precision);

/// Mode-i unfolding product: G[a][b] = sum over the other indices of
/// x[.., a, ..] * y[.., b, ..].
Eigen::MatrixXd unfolded_gram(std::span<const double> x, std::span<const double> y, const Dims& dims,
                              std::size_t mode);

}  // namespace tnm
