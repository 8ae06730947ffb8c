#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tnm/tnm.hpp"

namespace tnm::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t parse_positive(const std::string& flag, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || v == 0) {
    throw UsageError(flag + " must be a positive integer, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError("seed must be a non-negative integer, got '" + text + "'");
  }
  return v;
}

Dims dims_flag(const std::string& text) {
  try {
    return parse_dims(text);
  } catch (const Error& e) {
    throw UsageError(std::string("--dims: ") + e.what());
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("TNM_SEED")) return parse_seed(env);
  return 0;
}

bool json_format(const std::string& format) {
  if (format == "json") return true;
  if (format == "text") return false;
  throw UsageError("--format must be json or text, got '" + format + "'");
}

struct ClassifyArgs {
  std::string dims;
  std::string samples;
  std::string format = "json";
};

struct ThresholdArgs {
  std::string dims;
  std::string format = "json";
};

struct ScanArgs {
  std::string max_k = "1";
  std::string max_dim = "1";
  std::string max_m = "1";
  std::string check = "equivalence";
  std::string out;
  unsigned threads = 0;
};

struct SimulateArgs {
  std::string dims;
  std::string samples;
  std::string seed;
  std::string out;
};

struct VerifyArgs {
  std::string dims;
  std::string samples;
  std::string trials = "20";
  std::string restarts = "4";
  std::string seed;
  std::string data;
  std::string format = "text";
  unsigned threads = 0;
};

int cmd_classify(const ClassifyArgs& a, std::ostream& out) {
  const Datum datum{dims_flag(a.dims), parse_positive("--samples", a.samples)};
  const bool json = json_format(a.format);
  const auto report = explain(datum);
  out << (json ? report_to_json(report) : report_to_text(report));
  return kExitOk;
}

int cmd_threshold(const ThresholdArgs& a, std::ostream& out) {
  const Dims dims = dims_flag(a.dims);
  const bool json = json_format(a.format);
  const auto report = thresholds(dims);
  out << (json ? thresholds_to_json(dims, report) : thresholds_to_text(dims, report));
  return kExitOk;
}

int cmd_scan(const ScanArgs& a, std::ostream& out, std::ostream& err) {
  const ScanBounds bounds{parse_positive("--max-k", a.max_k), parse_positive("--max-dim", a.max_dim),
                          parse_positive("--max-m", a.max_m)};
  const auto check = parse_scan_check(a.check);
  if (!check) throw UsageError("--check must be equivalence, monotone or castling, got '" + a.check + "'");
  if (scan_size(bounds) > kMaxScanSize) {
    throw UsageError("grid has " + to_decimal(scan_size(bounds)) + " data; limit is " + std::to_string(kMaxScanSize));
  }
  const ScanResult result = run_scan(bounds, *check, a.threads);
  if (a.out.empty()) {
    write_scan_csv(out, result);
  } else {
    std::ofstream file(a.out, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::kIo, "cannot write " + a.out);
    write_scan_csv(file, result);
    if (!file) throw Error(ErrorCode::kIo, "write failed for " + a.out);
  }
  err << "scan " << to_string(*check) << ": " << result.rows.size() << " data, " << result.failures
      << " failures\n";
  return result.failures == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const Dims dims = dims_flag(a.dims);
  const std::uint64_t m = parse_positive("--samples", a.samples);
  const std::uint64_t seed = a.seed.empty() ? default_seed() : parse_seed(a.seed);
  const SampleSet samples = sample_standard(dims, m, seed);
  if (a.out.empty()) {
    out << sample_set_to_json(samples);
  } else {
    write_sample_set(a.out, samples);
  }
  return kExitOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  VerifyOptions options;
  options.trials = parse_positive("--trials", a.trials);
  options.restarts = parse_positive("--restarts", a.restarts);
  if (options.restarts < 2) throw UsageError("--restarts must be >= 2");
  options.seed = a.seed.empty() ? default_seed() : parse_seed(a.seed);
  options.threads = a.threads;
  const bool json = json_format(a.format);

  VerificationReport report;
  if (!a.data.empty()) {
    const SampleSet samples = read_sample_set(a.data);
    if (!a.dims.empty() && dims_flag(a.dims) != samples.dims) {
      throw UsageError("--dims does not match the dims stored in " + a.data);
    }
    if (!a.samples.empty() && parse_positive("--samples", a.samples) != samples.m) {
      throw UsageError("--samples does not match the sample count stored in " + a.data);
    }
    report = verify_samples(samples, options);
  } else {
    if (a.dims.empty() || a.samples.empty()) throw UsageError("verify needs --dims and --samples, or --data");
    report = verify_datum(Datum{dims_flag(a.dims), parse_positive("--samples", a.samples)}, options);
  }
  out << (json ? verification_to_json(report) : verification_to_text(report));
  if (report.numerical_failure()) return kExitNumerical;
  return report.hard_clauses_agree() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sample-size thresholds and stability classes for tensor normal models", "tnm"};
  app.require_subcommand(1);

  ClassifyArgs classify_args;
  auto* classify = app.add_subcommand("classify", "Classify a datum (dims; samples) and report every quantity");
  classify->add_option("--dims", classify_args.dims, "Comma-separated dimensions d_1,...,d_k")->required();
  classify->add_option("--samples", classify_args.samples, "Sample count m")->required();
  classify->add_option("--format", classify_args.format, "json or text")->capture_default_str();

  ThresholdArgs threshold_args;
  auto* threshold = app.add_subcommand("threshold", "Minimal sample counts for boundedness, existence, uniqueness");
  threshold->add_option("--dims", threshold_args.dims, "Comma-separated dimensions")->required();
  threshold->add_option("--format", threshold_args.format, "json or text")->capture_default_str();

  ScanArgs scan_args;
  auto* scan = app.add_subcommand("scan", "Cross-check the classifiers over a grid of normalized data");
  scan->add_option("--max-k", scan_args.max_k, "Largest number of factors")->capture_default_str();
  scan->add_option("--max-dim", scan_args.max_dim, "Largest dimension")->capture_default_str();
  scan->add_option("--max-m", scan_args.max_m, "Largest sample count")->capture_default_str();
  scan->add_option("--check", scan_args.check, "equivalence, monotone or castling")->capture_default_str();
  scan->add_option("--out", scan_args.out, "CSV output path (stdout if omitted)");
  scan->add_option("--threads", scan_args.threads, "Worker threads (0 = all cores)")->capture_default_str();

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand("simulate", "Write standard-normal samples as a SampleSet JSON file");
  simulate->add_option("--dims", simulate_args.dims, "Comma-separated dimensions")->required();
  simulate->add_option("--samples", simulate_args.samples, "Sample count m")->required();
  simulate->add_option("--seed", simulate_args.seed, "RNG seed (default: $TNM_SEED or 0)");
  simulate->add_option("--out", simulate_args.out, "Output path (stdout if omitted)");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Fit the MLE numerically and compare with the predicted profile");
  verify->add_option("--dims", verify_args.dims, "Comma-separated dimensions");
  verify->add_option("--samples", verify_args.samples, "Sample count m");
  verify->add_option("--trials", verify_args.trials, "Independent data sets")->capture_default_str();
  verify->add_option("--restarts", verify_args.restarts, "Random initializations per data set")
      ->capture_default_str();
  verify->add_option("--seed", verify_args.seed, "RNG seed (default: $TNM_SEED or 0)");
  verify->add_option("--data", verify_args.data, "Fit this SampleSet file instead of simulating");
  verify->add_option("--format", verify_args.format, "json or text")->capture_default_str();
  verify->add_option("--threads", verify_args.threads, "Worker threads (0 = all cores)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "tnm: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*classify) return cmd_classify(classify_args, out);
    if (*threshold) return cmd_threshold(threshold_args, out);
    if (*scan) return cmd_scan(scan_args, out, err);
    if (*simulate) return cmd_simulate(simulate_args, out);
    if (*verify) return cmd_verify(verify_args, out);
  } catch (const UsageError& e) {
    err << "tnm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "tnm: " << e.what() << '\n';
    return e.code() == ErrorCode::kDegenerateStatistic ? kExitNumerical : kExitUsage;
  }
  return kExitUsage;
}

}  // namespace tnm::cli
