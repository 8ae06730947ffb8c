#include "tnm/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "tnm/error.hpp"

namespace tnm {
namespace {

using Json = nlohmann::ordered_json;

Json datum_json(const Datum& d) {
  Json dims = Json::array();
  for (auto v : d.dims) dims.push_back(std::to_string(v));
  return Json{{"dims", dims}, {"m", std::to_string(d.m)}};
}

std::uint64_t parse_u64(const std::string& text) {
  std::uint64_t out = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw Error(ErrorCode::kParse, "not an unsigned integer: '" + text + "'");
  return out;
}

Datum datum_from_json(const Json& j) {
  Datum d;
  for (const auto& v : j.at("dims")) d.dims.push_back(parse_u64(v.get<std::string>()));
  d.m = parse_u64(j.at("m").get<std::string>());
  return d;
}

Json exact_json(const ExactInt& v) { return to_decimal(v); }

ExactInt exact_from_json(const Json& j) { return parse_exact(j.get<std::string>()); }

Json thresholds_json(const ThresholdReport& t) {
  Json out{{"mlt_b", exact_json(t.mlt_b)}, {"mlt_e", exact_json(t.mlt_e)}, {"mlt_u", exact_json(t.mlt_u)}};
  if (t.cor_bounds) {
    out["cor_bounds"] = Json::array({exact_json(t.cor_bounds->first), exact_json(t.cor_bounds->second)});
  } else {
    out["cor_bounds"] = nullptr;
  }
  return out;
}

ThresholdReport thresholds_from_json(const Json& j) {
  ThresholdReport t{exact_from_json(j.at("mlt_b")), exact_from_json(j.at("mlt_e")),
                    exact_from_json(j.at("mlt_u")), std::nullopt};
  if (!j.at("cor_bounds").is_null()) {
    t.cor_bounds = std::make_pair(exact_from_json(j.at("cor_bounds").at(0)),
                                  exact_from_json(j.at("cor_bounds").at(1)));
  }
  return t;
}

StabilityClass class_from_json(const Json& j) {
  const auto parsed = parse_stability_class(j.get<std::string>());
  if (!parsed) throw Error(ErrorCode::kParse, "unknown class '" + j.get<std::string>() + "'");
  return *parsed;
}

template <typename Fn>
auto wrap_parse(Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string yes_no(bool v) { return v ? "yes" : "no"; }

}  // namespace

std::string sample_set_to_json(const SampleSet& samples) {
  Json out{{"dims", samples.dims}, {"m", samples.m}, {"field", "real"}, {"data", samples.data}};
  return out.dump() + "\n";
}

SampleSet sample_set_from_json(std::string_view text) {
  SampleSet out = wrap_parse([&] {
    const Json j = Json::parse(text);
    if (j.contains("field") && j.at("field") != "real") {
      throw Error(ErrorCode::kParse, "only real-field sample sets are supported");
    }
    SampleSet s;
    s.dims = j.at("dims").get<Dims>();
    s.m = j.at("m").get<std::uint64_t>();
    s.data = j.at("data").get<std::vector<double>>();
    return s;
  });
  validate(out);
  return out;
}

void write_sample_set(const std::filesystem::path& path, const SampleSet& samples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << sample_set_to_json(samples);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

SampleSet read_sample_set(const std::filesystem::path& path) { return sample_set_from_json(read_file(path)); }

std::string report_to_json(const ClassificationReport& r, int indent) {
  Json indices = Json::array();
  for (const auto& idx : r.indices) {
    indices.push_back(Json{{"factor", std::to_string(idx.factor + 1)},
                           {"dim", std::to_string(idx.dim)},
                           {"index", idx.index ? Json(to_decimal(*idx.index)) : Json(nullptr)}});
  }
  Json trace = Json::array();
  for (const auto& step : r.castling_trace.steps) trace.push_back(datum_json(step));

  Json out;
  out["datum"] = datum_json(r.datum);
  out["normalized"] = datum_json(r.normalized);
  out["R"] = exact_json(r.r);
  out["Delta"] = exact_json(r.delta);
  out["g_max"] = exact_json(r.g_max);
  out["Z"] = exact_json(r.z);
  out["indices"] = indices;
  out["castling_trace"] = trace;
  out["class"] = to_string(r.closed_form);
  out["class_recursive"] = to_string(r.recursive);
  out["classifiers_agree"] = r.classifiers_agree();
  out["mle_profile"] = Json{{"bounded_as", r.profile.bounded_as},
                            {"exists_as", r.profile.exists_as},
                            {"unique_as", r.profile.unique_as},
                            {"always_unbounded", r.profile.always_unbounded}};
  out["thresholds"] = thresholds_json(r.thresholds);
  out["git_dimension"] = r.git_dimension ? exact_json(*r.git_dimension) : Json(nullptr);
  return out.dump(indent) + "\n";
}

ClassificationReport report_from_json(std::string_view text) {
  return wrap_parse([&] {
    const Json j = Json::parse(text);
    ClassificationReport r;
    r.datum = datum_from_json(j.at("datum"));
    r.normalized = datum_from_json(j.at("normalized"));
    r.r = exact_from_json(j.at("R"));
    r.delta = exact_from_json(j.at("Delta"));
    r.g_max = exact_from_json(j.at("g_max"));
    r.z = exact_from_json(j.at("Z"));
    for (const auto& idx : j.at("indices")) {
      FactorIndex f{parse_u64(idx.at("factor").get<std::string>()) - 1, parse_u64(idx.at("dim").get<std::string>()),
                    std::nullopt};
      if (!idx.at("index").is_null()) {
        ExactRational q(idx.at("index").get<std::string>(), 10);
        q.canonicalize();
        f.index = q;
      }
      r.indices.push_back(std::move(f));
    }
    for (const auto& step : j.at("castling_trace")) r.castling_trace.steps.push_back(datum_from_json(step));
    r.closed_form = class_from_json(j.at("class"));
    r.recursive = class_from_json(j.at("class_recursive"));
    const auto& p = j.at("mle_profile");
    r.profile = MleProfile{p.at("bounded_as").get<bool>(), p.at("exists_as").get<bool>(),
                           p.at("unique_as").get<bool>(), p.at("always_unbounded").get<bool>()};
    r.thresholds = thresholds_from_json(j.at("thresholds"));
    if (!j.at("git_dimension").is_null()) r.git_dimension = exact_from_json(j.at("git_dimension"));
    return r;
  });
}

std::string report_to_text(const ClassificationReport& r) {
  std::ostringstream out;
  auto line = [&](std::string_view key, const std::string& value) {
    out << std::left << std::setw(20) << key << value << '\n';
  };
  line("datum", to_string(r.datum));
  line("normalized", to_string(r.normalized));
  line("R", to_decimal(r.r));
  line("Delta", to_decimal(r.delta));
  line("g_max", to_decimal(r.g_max));
  line("Z", to_decimal(r.z));
  std::string indices;
  for (const auto& idx : r.indices) {
    if (!indices.empty()) indices += ' ';
    indices += idx.index ? to_decimal(*idx.index) : "-";
  }
  line("indices", indices);
  std::string trace;
  for (const auto& step : r.castling_trace.steps) {
    if (!trace.empty()) trace += " -> ";
    trace += to_string(step);
  }
  line("castling_trace", trace);
  line("class", std::string(to_string(r.closed_form)));
  line("class_recursive", std::string(to_string(r.recursive)));
  line("bounded_as", yes_no(r.profile.bounded_as));
  line("exists_as", yes_no(r.profile.exists_as));
  line("unique_as", yes_no(r.profile.unique_as));
  line("always_unbounded", yes_no(r.profile.always_unbounded));
  line("mlt_b", to_decimal(r.thresholds.mlt_b));
  line("mlt_e", to_decimal(r.thresholds.mlt_e));
  line("mlt_u", to_decimal(r.thresholds.mlt_u));
  line("cor_bounds", r.thresholds.cor_bounds ? to_decimal(r.thresholds.cor_bounds->first) + " " +
                                                   to_decimal(r.thresholds.cor_bounds->second)
                                             : "-");
  line("git_dimension", r.git_dimension ? to_decimal(*r.git_dimension) : "empty");
  return out.str();
}

std::string thresholds_to_json(const Dims& dims, const ThresholdReport& report, int indent) {
  Json d = Json::array();
  for (auto v : dims) d.push_back(std::to_string(v));
  Json out{{"dims", d}};
  const Json body = thresholds_json(report);
  for (const auto& [key, value] : body.items()) out[key] = value;
  return out.dump(indent) + "\n";
}

std::string thresholds_to_text(const Dims& dims, const ThresholdReport& report) {
  std::ostringstream out;
  std::string d;
  for (auto v : dims) d += (d.empty() ? "" : ",") + std::to_string(v);
  out << std::left << std::setw(12) << "dims" << d << '\n';
  out << std::setw(12) << "mlt_b" << to_decimal(report.mlt_b) << '\n';
  out << std::setw(12) << "mlt_e" << to_decimal(report.mlt_e) << '\n';
  out << std::setw(12) << "mlt_u" << to_decimal(report.mlt_u) << '\n';
  out << std::setw(12) << "cor_bounds"
      << (report.cor_bounds ? to_decimal(report.cor_bounds->first) + " " + to_decimal(report.cor_bounds->second)
                            : "-")
      << '\n';
  return out.str();
}

std::string verification_to_json(const VerificationReport& report, int indent) {
  Json trials = Json::array();
  for (const auto& t : report.trials) {
    Json statuses = Json::array();
    for (auto s : t.statuses) statuses.push_back(to_string(s));
    Json entry{{"data_seed", std::to_string(t.data_seed)},
               {"statuses", statuses},
               {"logliks", t.logliks},
               {"iterations", t.iterations},
               {"max_residual", t.max_residual},
               {"factor_spread", t.factor_spread},
               {"loglik_spread", t.loglik_spread},
               {"restarts_agree", t.restarts_agree}};
    entry["classical_error"] = t.classical_error ? Json(*t.classical_error) : Json(nullptr);
    trials.push_back(entry);
  }
  Json clauses = Json::array();
  for (const auto& c : report.clauses) {
    clauses.push_back(Json{{"clause", c.clause},
                           {"predicted", c.predicted},
                           {"observed", c.observed},
                           {"agrees", c.agrees()},
                           {"hard", c.hard},
                           {"detail", c.detail}});
  }
  Json out{{"datum", datum_json(report.datum)},
           {"class", to_string(report.predicted_class)},
           {"clauses", clauses},
           {"all_hard_clauses_agree", report.hard_clauses_agree()},
           {"trials", trials}};
  return out.dump(indent) + "\n";
}

std::string verification_to_text(const VerificationReport& report) {
  std::ostringstream out;
  out << "datum " << to_string(report.datum) << "  predicted class " << to_string(report.predicted_class) << '\n';
  for (const auto& c : report.clauses) {
    out << std::left << std::setw(14) << c.clause << "predicted " << std::setw(4) << yes_no(c.predicted)
        << " observed " << std::setw(4) << yes_no(c.observed) << (c.agrees() ? " AGREE   " : " DISAGREE")
        << (c.hard ? "" : " (diagnostic)") << "  " << c.detail << '\n';
  }
  return out.str();
}

Dims parse_dims(std::string_view text) {
  Dims out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view token =
        text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || v == 0) {
      throw Error(ErrorCode::kParse, "dimensions must be positive integers, got '" + std::string(token) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace tnm
