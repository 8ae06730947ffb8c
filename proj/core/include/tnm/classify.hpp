#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "tnm/castling.hpp"
#include "tnm/datum.hpp"

namespace tnm {

/// Generic stability of the product-of-SL action on m-tuples of tensors.
/// "Generically semistable" is the same as class != kUnstable.
enum class StabilityClass { kUnstable, kPolystableNotStable, kStable };

/// "unstable", "polystable_not_stable" or "stable".
std::string_view to_string(StabilityClass cls);
std::optional<StabilityClass> parse_stability_class(std::string_view text);

/// Almost-sure behaviour of the maximum likelihood estimate. Identical for the
/// real and the complex model.
struct MleProfile {
  bool bounded_as = false;
  bool exists_as = false;
  bool unique_as = false;
  bool always_unbounded = true;

  friend bool operator==(const MleProfile&, const MleProfile&) = default;
};

/// Minimal sample counts beyond which the log-likelihood is a.s. bounded,
/// an MLE a.s. exists, and the MLE is a.s. unique.
struct ThresholdReport {
  ExactInt mlt_b;
  ExactInt mlt_e;
  ExactInt mlt_u;
  /// (ceil(r), ceil(r) + 1) with r = d_k / (d_1 ... d_{k-1}); present only for
  /// normalized dims with k >= 3.
  std::optional<std::pair<ExactInt, ExactInt>> cor_bounds;

  friend bool operator==(const ThresholdReport&, const ThresholdReport&) = default;
};

/// Decides the class from the signs of R, Delta and R - g_max^2.
StabilityClass classify_closed_form(const Datum& datum);

/// Decides the class by castling to the minimal datum and reading off the
/// terminal case.
StabilityClass classify_recursive(const Datum& datum);

MleProfile mle_profile(StabilityClass cls);
MleProfile mle_profile(const Datum& datum);

ThresholdReport thresholds(const Dims& dims);

/// Dimension of the projective GIT quotient over C; nullopt when empty.
std::optional<ExactInt> git_dimension(const Datum& datum);

struct FactorIndex {
  std::size_t factor = 0;  // zero-based position in the input dims
  std::uint64_t dim = 0;
  std::optional<ExactRational> index;  // absent for unit dimensions
};

struct ClassificationReport {
  Datum datum;
  Datum normalized;
  ExactInt r;
  ExactInt delta;
  ExactInt g_max;
  ExactInt z;  // Z(d_1^2, ..., d_k^2)
  std::vector<FactorIndex> indices;
  CastlingTrace castling_trace;
  StabilityClass closed_form = StabilityClass::kUnstable;
  StabilityClass recursive = StabilityClass::kUnstable;
  MleProfile profile;
  ThresholdReport thresholds;
  std::optional<ExactInt> git_dimension;

  bool classifiers_agree() const { return closed_form == recursive; }
};

/// Full dossier for a datum. A disagreement between the two classifiers is
/// logged to stderr and recorded in the report; the closed form wins.
ClassificationReport explain(const Datum& datum);

}  // namespace tnm
