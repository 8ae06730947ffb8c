#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tnm/classify.hpp"

namespace tnm {

enum class ScanCheck { kEquivalence, kMonotone, kCastling };

std::string_view to_string(ScanCheck check);
std::optional<ScanCheck> parse_scan_check(std::string_view text);

struct ScanBounds {
  std::uint64_t max_k = 1;
  std::uint64_t max_dim = 1;
  std::uint64_t max_m = 1;
};

/// Upper limit on the number of data a single scan may enumerate.
inline constexpr std::uint64_t kMaxScanSize = 10'000'000;

/// Number of normalized data in the grid: (1) plus every nondecreasing tuple
/// of length 1..max_k over [2, max_dim], times max_m sample counts.
ExactInt scan_size(const ScanBounds& bounds);

/// Normalized data in enumeration order: dims by length then
/// lexicographically, m innermost.
std::vector<Datum> enumerate_normalized(const ScanBounds& bounds);

struct ScanRow {
  Datum datum;
  ExactInt r;
  ExactInt delta;
  ExactInt g_max;
  StabilityClass closed_form = StabilityClass::kUnstable;
  StabilityClass recursive = StabilityClass::kUnstable;
  bool agree = true;
};

/// Runs the selected cross-check on a single datum.
///  - equivalence: the two classifiers agree;
///  - monotone: stability and semistability persist from m to m + 1;
///  - castling: class, R, Delta, g_max and the GIT dimension are unchanged by
///    castle_step (vacuously true when the datum is not castlable).
ScanRow check_datum(const Datum& datum, ScanCheck check);

struct ScanResult {
  std::vector<ScanRow> rows;
  std::size_t failures = 0;
};

/// Throws kInvalidDatum when the grid exceeds kMaxScanSize.
ScanResult run_scan(const ScanBounds& bounds, ScanCheck check, unsigned threads = 0);

inline constexpr std::string_view kScanCsvHeader = "dims,m,R,Delta,g_max,class_closed_form,class_recursive,agree";

/// One CSV line without trailing newline; dims are joined with 'x'.
std::string scan_csv_row(const ScanRow& row);
void write_scan_csv(std::ostream& out, const ScanResult& result);

}  // namespace tnm
