#include "tnm/mle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tnm/error.hpp"
#include "tnm/parallel.hpp"

namespace tnm {
namespace {

double log_det_pd(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite, "factor lost positive definiteness");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

void require_matching(const SampleSet& samples, const KroneckerPrecision& precision) {
  if (precision.dims() != samples.dims) {
    throw Error(ErrorCode::kShapeMismatch, "precision factor sizes do not match the sample dims");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

struct BlockSpectrum {
  double smallest = 0.0;
  double largest = 0.0;
  bool finite = true;
};

BlockSpectrum spectrum(const Eigen::MatrixXd& s) {
  BlockSpectrum out;
  if (!s.allFinite()) {
    out.finite = false;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  out.smallest = eig.eigenvalues().minCoeff();
  out.largest = eig.eigenvalues().maxCoeff();
  return out;
}

bool singular(const BlockSpectrum& sp) { return sp.smallest < 1e-12 * sp.largest; }

double block_scale(const SampleSet& samples, std::size_t factor) {
  return static_cast<double>(samples.m) * static_cast<double>(samples.tensor_size()) /
         static_cast<double>(samples.dims[factor]);
}

Eigen::MatrixXd block_maximizer(const Eigen::MatrixXd& s, double scale) {
  Eigen::MatrixXd out = scale * s.llt().solve(Eigen::MatrixXd::Identity(s.rows(), s.cols()));
  return 0.5 * (out + out.transpose());
}

}  // namespace

SampleSet sample_standard(const Dims& dims, std::uint64_t m, std::uint64_t seed) {
  validate(Datum{dims, m});
  SampleSet out{dims, m, {}};
  out.data.resize(out.tensor_size() * m);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (double& v : out.data) v = normal(rng);
  return out;
}

SampleSet sample_from_model(const KroneckerPrecision& precision, std::uint64_t m, std::uint64_t seed) {
  validate(precision);
  const Dims dims = precision.dims();
  KroneckerPrecision transforms;
  for (const auto& psi : precision.factors) {
    Eigen::LLT<Eigen::MatrixXd> llt(psi);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::kNotPositiveDefinite, "Cholesky failed");
    Eigen::MatrixXd lower = llt.matrixL();
    // L^{-T}: z ~ N(0, I) maps to L^{-T} z ~ N(0, Psi^{-1}).
    transforms.factors.push_back(
        lower.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(psi.rows(), psi.cols())));
  }
  SampleSet out = sample_standard(dims, m, seed);
  for (std::size_t s = 0; s < m; ++s) {
    const auto mapped = apply_kronecker(out.sample(s), dims, transforms);
    std::copy(mapped.begin(), mapped.end(), out.sample(s).begin());
  }
  return out;
}

KroneckerPrecision random_precision(const Dims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  KroneckerPrecision out;
  for (auto d : dims) {
    const auto n = static_cast<Eigen::Index>(d);
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r < n; ++r) a(r, c) = normal(rng);
    }
    Eigen::MatrixXd psi = a.transpose() * a + 1e-2 * Eigen::MatrixXd::Identity(n, n);
    out.factors.push_back(0.5 * (psi + psi.transpose()));
  }
  return out;
}

double log_likelihood(const SampleSet& samples, const KroneckerPrecision& precision) {
  require_matching(samples, precision);
  const double m = static_cast<double>(samples.m);
  const double n = static_cast<double>(samples.tensor_size());
  double log_det = 0.0;
  for (std::size_t i = 0; i < precision.order(); ++i) {
    log_det += (n / static_cast<double>(samples.dims[i])) * log_det_pd(precision.factors[i]);
  }
  double quadratic = 0.0;
  for (std::size_t s = 0; s < samples.m; ++s) {
    const auto y = samples.sample(s);
    const auto ky = apply_kronecker(y, samples.dims, precision);
    for (std::size_t j = 0; j < y.size(); ++j) quadratic += y[j] * ky[j];
  }
  return 0.5 * m * log_det - 0.5 * quadratic;
}

Eigen::MatrixXd block_statistic(const SampleSet& samples, const KroneckerPrecision& precision,
                                std::size_t factor) {
  require_matching(samples, precision);
  if (factor >= precision.order()) throw Error(ErrorCode::kShapeMismatch, "factor index out of range");
  const auto w = static_cast<Eigen::Index>(samples.dims[factor]);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(w, w);
  std::vector<double> current;
  std::vector<double> scratch(samples.tensor_size());
  for (std::size_t t = 0; t < samples.m; ++t) {
    const auto y = samples.sample(t);
    current.assign(y.begin(), y.end());
    for (std::size_t j = 0; j < precision.order(); ++j) {
      if (j == factor) continue;
      mode_multiply(current, scratch, samples.dims, j, precision.factors[j]);
      current.swap(scratch);
    }
    s += unfolded_gram(y, current, samples.dims, factor);
  }
  return 0.5 * (s + s.transpose());
}

KroneckerPrecision flip_flop_step(const SampleSet& samples, const KroneckerPrecision& precision,
                                  std::size_t factor) {
  const Eigen::MatrixXd s = block_statistic(samples, precision, factor);
  const BlockSpectrum sp = spectrum(s);
  if (!sp.finite || sp.largest <= 0.0 || singular(sp)) {
    throw Error(ErrorCode::kDegenerateStatistic,
                "block statistic " + std::to_string(factor + 1) + " is numerically singular");
  }
  KroneckerPrecision out = precision;
  out.factors[factor] = block_maximizer(s, block_scale(samples, factor));
  return out;
}

double stationarity_residual(const SampleSet& samples, const KroneckerPrecision& precision) {
  double worst = 0.0;
  for (std::size_t i = 0; i < precision.order(); ++i) {
    const Eigen::MatrixXd s = block_statistic(samples, precision, i);
    const Eigen::MatrixXd& psi = precision.factors[i];
    const Eigen::MatrixXd target =
        block_scale(samples, i) * psi.llt().solve(Eigen::MatrixXd::Identity(psi.rows(), psi.cols()));
    worst = std::max(worst, (s - target).norm() / s.norm());
  }
  return worst;
}

KroneckerPrecision gauge_fix(const KroneckerPrecision& precision) {
  KroneckerPrecision out = precision;
  double absorbed_log = 0.0;
  for (std::size_t i = 1; i < out.order(); ++i) {
    const double d = static_cast<double>(out.factors[i].rows());
    const double log_c = log_det_pd(out.factors[i]) / d;
    out.factors[i] *= std::exp(-log_c);
    absorbed_log += log_c;
  }
  if (out.order() > 1) out.factors[0] *= std::exp(absorbed_log);
  return out;
}

double max_condition_number(const KroneckerPrecision& precision) {
  double worst = 1.0;
  for (const auto& f : precision.factors) {
    const BlockSpectrum sp = spectrum(f);
    if (!sp.finite || sp.smallest <= 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, sp.largest / sp.smallest);
  }
  return worst;
}

std::string_view to_string(FitStatus status) {
  switch (status) {
    case FitStatus::kConverged: return "converged";
    case FitStatus::kDiverged: return "diverged";
    case FitStatus::kMaxIterations: return "max_iterations";
    case FitStatus::kDegenerateStatistic: return "degenerate_statistic";
  }
  return "unknown";
}

FitReport fit_mle(const SampleSet& samples, const KroneckerPrecision& init, const FitOptions& options) {
  validate(samples);
  validate(init);
  require_matching(samples, init);
  if (!(options.tol > 0.0) || !(options.stationarity_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidDatum, "tolerance must be positive");
  }

  FitReport report;
  KroneckerPrecision current = init;
  const double initial = log_likelihood(samples, current);
  const double bound = options.divergence_bound.value_or(1e3 * (1.0 + std::abs(initial)));
  report.loglik = initial;
  report.loglik_history.push_back(initial);

  double previous = initial;
  for (std::uint64_t sweep = 1; sweep <= options.max_iter; ++sweep) {
    const KroneckerPrecision before = current;
    for (std::size_t i = 0; i < current.order(); ++i) {
      const Eigen::MatrixXd s = block_statistic(samples, current, i);
      const BlockSpectrum sp = spectrum(s);
      if (!sp.finite || sp.largest <= 0.0) {
        report.status = FitStatus::kDegenerateStatistic;
        report.iterations = sweep;
        report.detail = "block statistic " + std::to_string(i + 1) + " is zero or non-finite";
        return report;
      }
      if (singular(sp)) {
        report.status = FitStatus::kDiverged;
        report.iterations = sweep;
        report.detail = "block statistic " + std::to_string(i + 1) +
                        " is singular; the likelihood is unbounded along its kernel";
        return report;
      }
      current.factors[i] = block_maximizer(s, block_scale(samples, i));
    }
    const double value = log_likelihood(samples, current);
    report.loglik = value;
    report.loglik_history.push_back(value);
    report.iterations = sweep;

    if (value - initial > bound) {
      report.status = FitStatus::kDiverged;
      report.detail = "log-likelihood gain exceeded the divergence bound";
      return report;
    }
    if (max_condition_number(current) > options.max_condition) {
      report.status = FitStatus::kDiverged;
      report.detail = "factor condition number exceeded the divergence bound";
      return report;
    }
    // A single factor is maximized exactly by its block update.
    bool settled = std::abs(value - previous) <= options.tol * std::max(1.0, std::abs(previous));
    if (settled && options.step_tol) {
      const auto a = gauge_fix(before);
      const auto b = gauge_fix(current);
      for (std::size_t i = 0; i < a.order(); ++i) {
        settled = settled && relative_frobenius(a.factors[i], b.factors[i]) <= *options.step_tol;
      }
    }
    if (settled) settled = stationarity_residual(samples, current) <= options.stationarity_tol;
    if (current.order() == 1 || settled) {
      report.status = FitStatus::kConverged;
      report.factors = current;
      return report;
    }
    previous = value;
  }
  report.status = FitStatus::kMaxIterations;
  report.factors = current;
  return report;
}

double relative_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

namespace {

TrialResult run_trial(const SampleSet& samples, std::uint64_t trial, const VerifyOptions& options) {
  TrialResult result;
  std::vector<KroneckerPrecision> fixed;
  for (std::uint64_t r = 0; r < options.restarts; ++r) {
    const auto init = random_precision(samples.dims, derive_seed(options.seed, trial, r + 1));
    FitReport fit = fit_mle(samples, init, options.fit);
    result.statuses.push_back(fit.status);
    result.logliks.push_back(fit.loglik);
    result.iterations.push_back(fit.iterations);
    switch (fit.status) {
      case FitStatus::kConverged:
        ++result.converged;
        result.max_residual = std::max(result.max_residual, stationarity_residual(samples, *fit.factors));
        fixed.push_back(gauge_fix(*fit.factors));
        break;
      case FitStatus::kDiverged: ++result.diverged; break;
      case FitStatus::kMaxIterations: ++result.max_iterations; break;
      case FitStatus::kDegenerateStatistic: ++result.degenerate; break;
    }
  }

  for (std::size_t a = 0; a < fixed.size(); ++a) {
    for (std::size_t b = a + 1; b < fixed.size(); ++b) {
      for (std::size_t i = 0; i < fixed[a].order(); ++i) {
        result.factor_spread =
            std::max(result.factor_spread, relative_frobenius(fixed[a].factors[i], fixed[b].factors[i]));
      }
    }
  }
  for (std::size_t a = 0; a < result.logliks.size(); ++a) {
    for (std::size_t b = a + 1; b < result.logliks.size(); ++b) {
      if (result.statuses[a] == FitStatus::kConverged && result.statuses[b] == FitStatus::kConverged) {
        result.loglik_spread = std::max(result.loglik_spread, relative_gap(result.logliks[a], result.logliks[b]));
      }
    }
  }
  result.restarts_agree = result.converged == options.restarts && result.factor_spread <= options.agree_tol;

  if (samples.dims.size() == 1 && samples.m >= samples.dims.front() && !fixed.empty()) {
    const auto d = static_cast<Eigen::Index>(samples.dims.front());
    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t s = 0; s < samples.m; ++s) {
      const auto y = samples.sample(s);
      Eigen::Map<const Eigen::VectorXd> v(y.data(), d);
      scatter.noalias() += v * v.transpose();
    }
    const Eigen::MatrixXd classical =
        static_cast<double>(samples.m) * scatter.inverse();
    double worst = 0.0;
    for (const auto& f : fixed) worst = std::max(worst, relative_frobenius(f.factors[0], classical));
    result.classical_error = worst;
  }
  return result;
}

void check_verify_options(const VerifyOptions& options) {
  if (options.trials < 1) throw Error(ErrorCode::kInvalidDatum, "trials must be >= 1");
  if (options.restarts < 2) throw Error(ErrorCode::kInvalidDatum, "restarts must be >= 2");
}

void check_desk_scale(const Datum& datum) {
  if (datum.dimension() > kDeskScaleLimit) {
    throw Error(ErrorCode::kDeskScaleExceeded, "n = " + to_decimal(datum.dimension()) + " exceeds " +
                                                   std::to_string(kDeskScaleLimit));
  }
}

void add_clauses(VerificationReport& report, const VerifyOptions& options) {
  const std::size_t trials = report.trials.size();
  const std::size_t diverged = report.diverged_trials();
  const bool all_converged = report.converged_trials() == trials;
  std::size_t any_diverged_fit = 0;
  for (const auto& t : report.trials) any_diverged_fit += t.diverged;
  const bool mostly_diverged =
      static_cast<double>(diverged) >= options.diverged_fraction * static_cast<double>(trials);

  const std::string tally = std::to_string(diverged) + "/" + std::to_string(trials) + " trials diverged, " +
                            std::to_string(report.converged_trials()) + "/" + std::to_string(trials) +
                            " converged";

  // Boundedness: unbounded data must diverge in (almost) every trial; bounded
  // data must never diverge.
  ClauseCheck bounded{"bounded", report.predicted.bounded_as,
                      report.predicted.bounded_as ? any_diverged_fit == 0 : !mostly_diverged, true, tally};
  report.clauses.push_back(bounded);

  ClauseCheck exists{"exists", report.predicted.exists_as,
                     report.predicted.exists_as ? all_converged : !mostly_diverged, true, tally};
  report.clauses.push_back(exists);

  if (report.predicted.unique_as) {
    std::size_t agreeing = 0;
    double spread = 0.0;
    for (const auto& t : report.trials) {
      agreeing += t.restarts_agree ? 1 : 0;
      spread = std::max(spread, t.factor_spread);
    }
    report.clauses.push_back(ClauseCheck{
        "unique", true, agreeing == trials, true,
        std::to_string(agreeing) + "/" + std::to_string(trials) +
            " trials with restarts agreeing after gauge fixing; max spread " + std::to_string(spread)});
  } else if (report.predicted.exists_as) {
    // Distinct optima are a diagnostic only: random restarts are not
    // guaranteed to land on different points of the MLE set.
    const std::size_t witnesses = report.non_unique_trials(options.spread_floor);
    report.clauses.push_back(ClauseCheck{
        "unique", false, 2 * witnesses < trials, false,
        std::to_string(witnesses) + "/" + std::to_string(trials) +
            " trials with equal log-likelihoods but gauge-fixed factors differing by >= " +
            std::to_string(options.spread_floor)});
  }

  bool has_classical = false;
  double classical = 0.0;
  for (const auto& t : report.trials) {
    if (t.classical_error) {
      has_classical = true;
      classical = std::max(classical, *t.classical_error);
    }
  }
  if (has_classical) {
    report.clauses.push_back(ClauseCheck{"classical_mle", true, classical <= 1e-10, true,
                                         "max relative error " + std::to_string(classical)});
  }
}

}  // namespace

std::size_t VerificationReport::diverged_trials() const {
  return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const TrialResult& t) {
    return t.diverged == t.statuses.size();
  }));
}

std::size_t VerificationReport::converged_trials() const {
  return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const TrialResult& t) {
    return t.converged == t.statuses.size();
  }));
}

std::size_t VerificationReport::non_unique_trials(double spread_floor) const {
  return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [&](const TrialResult& t) {
    return t.converged >= 2 && t.factor_spread >= spread_floor;
  }));
}

bool VerificationReport::hard_clauses_agree() const {
  return std::all_of(clauses.begin(), clauses.end(),
                     [](const ClauseCheck& c) { return !c.hard || c.agrees(); });
}

bool VerificationReport::numerical_failure() const {
  return std::all_of(trials.begin(), trials.end(),
                     [](const TrialResult& t) { return t.degenerate == t.statuses.size(); });
}

VerificationReport verify_datum(const Datum& datum, const VerifyOptions& options) {
  validate(datum);
  check_verify_options(options);
  check_desk_scale(datum);

  VerificationReport report;
  report.datum = datum;
  report.predicted_class = classify_closed_form(datum);
  report.predicted = mle_profile(report.predicted_class);
  report.trials.resize(options.trials);
  parallel_for(options.trials, options.threads, [&](std::size_t t) {
    const std::uint64_t data_seed = derive_seed(options.seed, t, 0);
    const SampleSet samples = sample_standard(datum.dims, datum.m, data_seed);
    report.trials[t] = run_trial(samples, t, options);
    report.trials[t].data_seed = data_seed;
  });
  add_clauses(report, options);
  return report;
}

VerificationReport verify_samples(const SampleSet& samples, const VerifyOptions& options) {
  validate(samples);
  check_verify_options(options);
  const Datum datum{samples.dims, samples.m};
  check_desk_scale(datum);

  VerificationReport report;
  report.datum = datum;
  report.predicted_class = classify_closed_form(datum);
  report.predicted = mle_profile(report.predicted_class);
  report.trials.push_back(run_trial(samples, 0, options));
  add_clauses(report, options);
  return report;
}

}  // namespace tnm
