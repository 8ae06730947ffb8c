#include "tnm/classify.hpp"

#include <iostream>

#include "tnm/error.hpp"

namespace tnm {

std::string_view to_string(StabilityClass cls) {
  switch (cls) {
    case StabilityClass::kUnstable: return "unstable";
    case StabilityClass::kPolystableNotStable: return "polystable_not_stable";
    case StabilityClass::kStable: return "stable";
  }
  return "unknown";
}

std::optional<StabilityClass> parse_stability_class(std::string_view text) {
  if (text == "unstable") return StabilityClass::kUnstable;
  if (text == "polystable_not_stable") return StabilityClass::kPolystableNotStable;
  if (text == "stable") return StabilityClass::kStable;
  return std::nullopt;
}

StabilityClass classify_closed_form(const Datum& datum) {
  const ExactInt r = big_r(datum);
  const ExactInt g = g_max(datum);
  if (r < 0) return StabilityClass::kUnstable;
  if (r == 0) return g == 1 ? StabilityClass::kStable : StabilityClass::kPolystableNotStable;
  if (datum.m == 1) {
    return delta(datum) >= -1 ? StabilityClass::kStable : StabilityClass::kPolystableNotStable;
  }
  return (r > g * g || g == 1) ? StabilityClass::kStable : StabilityClass::kPolystableNotStable;
}

namespace {

// Minimal data with 2 d_k <= N are polystable, and stable except for
// (2,d,d;1) and (d,d;2) with d >= 2.
bool is_polystable_exception(const Datum& normalized) {
  const auto& d = normalized.dims;
  if (normalized.m == 1 && d.size() == 3) return d[0] == 2 && d[1] == d[2];
  if (normalized.m == 2 && d.size() == 2) return d[0] >= 2 && d[0] == d[1];
  return false;
}

}  // namespace

StabilityClass classify_recursive(const Datum& datum) {
  Datum current = normalize(datum);
  for (;;) {
    switch (castling_regime(current)) {
      case CastlingRegime::kAboveN:
        return StabilityClass::kUnstable;
      case CastlingRegime::kEqualsN:
        return current.dims.size() == 1 ? StabilityClass::kStable
                                        : StabilityClass::kPolystableNotStable;
      case CastlingRegime::kCastlable:
        current = castle_step(current);
        break;
      case CastlingRegime::kAtMostHalf:
        return is_polystable_exception(current) ? StabilityClass::kPolystableNotStable
                                                : StabilityClass::kStable;
    }
  }
}

MleProfile mle_profile(StabilityClass cls) {
  if (cls == StabilityClass::kUnstable) return MleProfile{false, false, false, true};
  return MleProfile{true, true, cls == StabilityClass::kStable, false};
}

MleProfile mle_profile(const Datum& datum) { return mle_profile(classify_closed_form(datum)); }

ThresholdReport thresholds(const Dims& dims) {
  const Datum normalized = normalize(Datum{dims, 1});
  const ExactInt n = normalized.dimension();

  std::vector<ExactInt> squares;
  for (auto d : normalized.dims) squares.push_back(to_exact(d) * to_exact(d));
  const ExactInt z = z_quantity(std::span<const ExactInt>(squares));

  // R(m) = m n - Z is increasing in m, so the first m with R >= 0 is ceil(Z/n).
  ExactInt first_bounded = ceil_div(z, n);
  if (first_bounded < 1) first_bounded = 1;

  ThresholdReport report;
  report.mlt_b = first_bounded;
  report.mlt_e = first_bounded;

  // Stability is monotone in m and holds once R > g_max^2, which R reaches
  // after at most g_max^2 / n + 1 further samples.
  ExactInt m = first_bounded;
  for (;;) {
    if (!m.fits_ulong_p()) throw Error(ErrorCode::kInvalidDatum, "sample threshold exceeds 64 bits");
    if (classify_closed_form(Datum{normalized.dims, m.get_ui()}) == StabilityClass::kStable) break;
    ++m;
  }
  report.mlt_u = m;

  if (normalized.dims.size() >= 3) {
    const ExactInt r_ceil = ceil_div(to_exact(normalized.dims.back()), n / to_exact(normalized.dims.back()));
    report.cor_bounds = std::make_pair(r_ceil, ExactInt(r_ceil + 1));
  }
  return report;
}

std::optional<ExactInt> git_dimension(const Datum& datum) {
  const ExactInt r = big_r(datum);
  if (r < 0) return std::nullopt;
  if (r == 0) return ExactInt(0);
  const ExactInt g = g_max(datum);
  const ExactInt dl = delta(datum);
  if (datum.m == 1 && dl == -2) return g > 3 ? ExactInt(g - 3) : ExactInt(0);
  if (datum.m == 2 && r == g * g && g > 1) return g;
  return dl;
}

ClassificationReport explain(const Datum& datum) {
  ClassificationReport report;
  report.datum = datum;
  report.normalized = normalize(datum);
  report.r = big_r(datum);
  report.delta = delta(datum);
  report.g_max = g_max(datum);

  std::vector<ExactInt> squares;
  for (auto d : datum.dims) squares.push_back(to_exact(d) * to_exact(d));
  report.z = z_quantity(std::span<const ExactInt>(squares));

  for (std::size_t i = 0; i < datum.dims.size(); ++i) {
    FactorIndex entry{i, datum.dims[i], std::nullopt};
    if (datum.dims[i] >= 2) entry.index = index_of_factor(datum, i);
    report.indices.push_back(std::move(entry));
  }

  report.castling_trace = reduce_to_minimal(datum);
  report.closed_form = classify_closed_form(datum);
  report.recursive = classify_recursive(datum);
  if (!report.classifiers_agree()) {
    std::cerr << "tnm: internal consistency alarm: closed form says "
              << to_string(report.closed_form) << " but recursive says "
              << to_string(report.recursive) << " for " << to_string(datum) << '\n';
  }
  report.profile = mle_profile(report.closed_form);
  report.thresholds = thresholds(datum.dims);
  report.git_dimension = git_dimension(datum);
  return report;
}

}  // namespace tnm
