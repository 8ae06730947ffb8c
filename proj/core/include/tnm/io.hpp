#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tnm/classify.hpp"
#include "tnm/mle.hpp"
#include "tnm/tensor.hpp"

namespace tnm {

// SampleSet files: {"dims":[...],"m":...,"field":"real","data":[...]}, data in
// sample-major / row-major order. Doubles use the shortest representation
// that parses back to the same bits.
std::string sample_set_to_json(const SampleSet& samples);
SampleSet sample_set_from_json(std::string_view text);
void write_sample_set(const std::filesystem::path& path, const SampleSet& samples);
SampleSet read_sample_set(const std::filesystem::path& path);

// Classification reports. Exact integers are written as decimal strings and
// the Empty GIT quotient as null.
std::string report_to_json(const ClassificationReport& report, int indent = 2);
ClassificationReport report_from_json(std::string_view text);
std::string report_to_text(const ClassificationReport& report);

std::string thresholds_to_json(const Dims& dims, const ThresholdReport& report, int indent = 2);
std::string thresholds_to_text(const Dims& dims, const ThresholdReport& report);

std::string verification_to_json(const VerificationReport& report, int indent = 2);
std::string verification_to_text(const VerificationReport& report);

/// Parses "a,b,c" into positive dimensions. Throws Error(kParse).
Dims parse_dims(std::string_view text);

}  // namespace tnm
