#include "tnm/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tnm/error.hpp"

namespace tnm {
namespace {

struct ModeSplit {
  std::size_t outer = 1;  // product of dims before the mode
  std::size_t width = 1;  // the mode's own dimension
  std::size_t inner = 1;  // product of dims after the mode
};

ModeSplit split_at(const Dims& dims, std::size_t mode) {
  ModeSplit s;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    if (j < mode) s.outer *= dims[j];
    if (j > mode) s.inner *= dims[j];
  }
  s.width = dims[mode];
  return s;
}

}  // namespace

std::size_t tensor_size(const Dims& dims) {
  std::size_t n = 1;
  for (auto d : dims) {
    if (d != 0 && n > std::numeric_limits<std::size_t>::max() / d) {
      throw Error(ErrorCode::kShapeMismatch, "tensor size overflows");
    }
    n *= d;
  }
  return n;
}

std::size_t SampleSet::tensor_size() const { return tnm::tensor_size(dims); }

std::span<const double> SampleSet::sample(std::size_t s) const {
  const std::size_t n = tensor_size();
  return std::span<const double>(data).subspan(s * n, n);
}

std::span<double> SampleSet::sample(std::size_t s) {
  const std::size_t n = tensor_size();
  return std::span<double>(data).subspan(s * n, n);
}

void validate(const SampleSet& samples) {
  validate(Datum{samples.dims, samples.m});
  const std::size_t expected = samples.tensor_size() * samples.m;
  if (samples.data.size() != expected) {
    throw Error(ErrorCode::kShapeMismatch, "sample data has " + std::to_string(samples.data.size()) +
                                               " entries, expected " + std::to_string(expected));
  }
  for (double v : samples.data) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidDatum, "sample data contains a non-finite entry");
  }
}

Dims KroneckerPrecision::dims() const {
  Dims out;
  for (const auto& f : factors) out.push_back(static_cast<std::uint64_t>(f.rows()));
  return out;
}

void validate(const KroneckerPrecision& precision) {
  if (precision.factors.empty()) throw Error(ErrorCode::kShapeMismatch, "precision has no factors");
  for (std::size_t i = 0; i < precision.factors.size(); ++i) {
    const auto& f = precision.factors[i];
    if (f.rows() != f.cols() || f.rows() == 0) {
      throw Error(ErrorCode::kShapeMismatch, "factor " + std::to_string(i + 1) + " is not square");
    }
    const double scale = f.norm();
    if (!std::isfinite(scale) || (f - f.transpose()).norm() > 1e-12 * scale) {
      throw Error(ErrorCode::kNotPositiveDefinite, "factor " + std::to_string(i + 1) + " is not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(f);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::kNotPositiveDefinite,
                  "factor " + std::to_string(i + 1) + " is not positive definite");
    }
  }
}

KroneckerPrecision identity_precision(const Dims& dims) {
  KroneckerPrecision out;
  for (auto d : dims) {
    const auto n = static_cast<Eigen::Index>(d);
    out.factors.push_back(Eigen::MatrixXd::Identity(n, n));
  }
  return out;
}

void mode_multiply(std::span<const double> in, std::span<double> out, const Dims& dims,
                   std::size_t mode, const Eigen::MatrixXd& a) {
  const ModeSplit s = split_at(dims, mode);
  for (std::size_t p = 0; p < s.outer; ++p) {
    const std::size_t base = p * s.width * s.inner;
    for (std::size_t row = 0; row < s.width; ++row) {
      double* dst = out.data() + base + row * s.inner;
      std::fill(dst, dst + s.inner, 0.0);
      for (std::size_t col = 0; col < s.width; ++col) {
        const double coeff = a(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
        if (coeff == 0.0) continue;
        const double* src = in.data() + base + col * s.inner;
        for (std::size_t q = 0; q < s.inner; ++q) dst[q] += coeff * src[q];
      }
    }
  }
}

std::vector<double> apply_kronecker(std::span<const double> tensor, const Dims& dims,
                                    const KroneckerPrecision& precision) {
  std::vector<double> current(tensor.begin(), tensor.end());
  std::vector<double> scratch(current.size());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    mode_multiply(current, scratch, dims, i, precision.factors[i]);
    current.swap(scratch);
  }
  return current;
}

Eigen::MatrixXd unfolded_gram(std::span<const double> x, std::span<const double> y, const Dims& dims,
                              std::size_t mode) {
  const ModeSplit s = split_at(dims, mode);
  const auto w = static_cast<Eigen::Index>(s.width);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(w, w);
  for (std::size_t p = 0; p < s.outer; ++p) {
    const std::size_t base = p * s.width * s.inner;
    // Column-major view: column `row` is the contiguous fibre of length inner.
    Eigen::Map<const Eigen::MatrixXd> xs(x.data() + base, static_cast<Eigen::Index>(s.inner), w);
    Eigen::Map<const Eigen::MatrixXd> ys(y.data() + base, static_cast<Eigen::Index>(s.inner), w);
    gram.noalias() += xs.transpose() * ys;
  }
  return gram;
}

}  // namespace tnm
