#include "tnm/scan.hpp"

#include <algorithm>

#include "tnm/castling.hpp"
#include "tnm/error.hpp"
#include "tnm/parallel.hpp"

namespace tnm {
namespace {

ExactInt binomial(std::uint64_t n, std::uint64_t k) {
  ExactInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

void extend_tuples(Dims& current, std::uint64_t max_len, std::uint64_t max_dim, std::vector<Dims>& out) {
  if (!current.empty()) out.push_back(current);
  if (current.size() == max_len) return;
  const std::uint64_t start = current.empty() ? 2 : current.back();
  for (std::uint64_t d = start; d <= max_dim; ++d) {
    current.push_back(d);
    extend_tuples(current, max_len, max_dim, out);
    current.pop_back();
  }
}

}  // namespace

std::string_view to_string(ScanCheck check) {
  switch (check) {
    case ScanCheck::kEquivalence: return "equivalence";
    case ScanCheck::kMonotone: return "monotone";
    case ScanCheck::kCastling: return "castling";
  }
  return "unknown";
}

std::optional<ScanCheck> parse_scan_check(std::string_view text) {
  if (text == "equivalence") return ScanCheck::kEquivalence;
  if (text == "monotone") return ScanCheck::kMonotone;
  if (text == "castling") return ScanCheck::kCastling;
  return std::nullopt;
}

ExactInt scan_size(const ScanBounds& bounds) {
  ExactInt tuples = 1;
  if (bounds.max_dim >= 2) {
    // Multisets of size k from (max_dim - 1) values.
    for (std::uint64_t k = 1; k <= bounds.max_k; ++k) tuples += binomial(bounds.max_dim - 2 + k, k);
  }
  return tuples * to_exact(bounds.max_m);
}

std::vector<Datum> enumerate_normalized(const ScanBounds& bounds) {
  if (bounds.max_k < 1 || bounds.max_dim < 1 || bounds.max_m < 1) {
    throw Error(ErrorCode::kInvalidDatum, "scan bounds must be >= 1");
  }
  if (scan_size(bounds) > kMaxScanSize) {
    throw Error(ErrorCode::kInvalidDatum, "scan grid has " + to_decimal(scan_size(bounds)) + " data, limit is " +
                                              std::to_string(kMaxScanSize));
  }
  std::vector<Dims> tuples{{1}};
  Dims scratch;
  std::vector<Dims> grown;
  extend_tuples(scratch, bounds.max_k, bounds.max_dim, grown);
  std::stable_sort(grown.begin(), grown.end(), [](const Dims& a, const Dims& b) { return a.size() < b.size(); });
  tuples.insert(tuples.end(), grown.begin(), grown.end());

  std::vector<Datum> out;
  out.reserve(tuples.size() * bounds.max_m);
  for (const auto& dims : tuples) {
    for (std::uint64_t m = 1; m <= bounds.max_m; ++m) out.push_back(Datum{dims, m});
  }
  return out;
}

ScanRow check_datum(const Datum& datum, ScanCheck check) {
  ScanRow row{datum, big_r(datum), delta(datum), g_max(datum), classify_closed_form(datum),
              classify_recursive(datum), true};
  switch (check) {
    case ScanCheck::kEquivalence:
      row.agree = row.closed_form == row.recursive;
      break;
    case ScanCheck::kMonotone: {
      const auto next = classify_closed_form(Datum{datum.dims, datum.m + 1});
      const bool stable_kept = row.closed_form != StabilityClass::kStable || next == StabilityClass::kStable;
      const bool semistable_kept =
          row.closed_form == StabilityClass::kUnstable || next != StabilityClass::kUnstable;
      row.agree = stable_kept && semistable_kept;
      break;
    }
    case ScanCheck::kCastling: {
      const Datum normalized = normalize(datum);
      if (castling_regime(normalized) != CastlingRegime::kCastlable) break;
      const Datum castled = castle_step(normalized);
      row.agree = classify_closed_form(castled) == row.closed_form && big_r(castled) == row.r &&
                  tnm::delta(castled) == row.delta && tnm::g_max(castled) == row.g_max &&
                  git_dimension(castled) == git_dimension(datum);
      break;
    }
  }
  return row;
}

ScanResult run_scan(const ScanBounds& bounds, ScanCheck check, unsigned threads) {
  const auto data = enumerate_normalized(bounds);
  ScanResult result;
  result.rows.resize(data.size());
  parallel_for(data.size(), threads, [&](std::size_t i) { result.rows[i] = check_datum(data[i], check); });
  for (const auto& row : result.rows) result.failures += row.agree ? 0 : 1;
  return result;
}

std::string scan_csv_row(const ScanRow& row) {
  std::string dims;
  for (auto d : row.datum.dims) dims += (dims.empty() ? "" : "x") + std::to_string(d);
  std::string out = dims;
  out += ',' + std::to_string(row.datum.m);
  out += ',' + to_decimal(row.r);
  out += ',' + to_decimal(row.delta);
  out += ',' + to_decimal(row.g_max);
  out += ',';
  out += to_string(row.closed_form);
  out += ',';
  out += to_string(row.recursive);
  out += row.agree ? ",true" : ",false";
  return out;
}

void write_scan_csv(std::ostream& out, const ScanResult& result) {
  out << kScanCsvHeader << '\n';
  for (const auto& row : result.rows) out << scan_csv_row(row) << '\n';
}

}  // namespace tnm
