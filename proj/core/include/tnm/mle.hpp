#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tnm/classify.hpp"
#include "tnm/tensor.hpp"

namespace tnm {

/// i.i.d. standard normal entries from a seeded std::mt19937_64.
SampleSet sample_standard(const Dims& dims, std::uint64_t m, std::uint64_t seed);

/// Draws m tensors with covariance (Psi_1 (x) ... (x) Psi_k)^{-1} by applying
/// L_i^{-T} mode-wise to standard normal tensors (Psi_i = L_i L_i^T).
SampleSet sample_from_model(const KroneckerPrecision& precision, std::uint64_t m, std::uint64_t seed);

/// Psi_i = A_i^T A_i + 1e-2 I with A_i standard normal.
KroneckerPrecision random_precision(const Dims& dims, std::uint64_t seed);

/// (m/2) sum_i (n/d_i) log det Psi_i - (1/2) sum_s <Y_s, (Psi_1 (x) .. (x) Psi_k) Y_s>,
/// up to the usual additive constant.
double log_likelihood(const SampleSet& samples, const KroneckerPrecision& precision);

/// S_i = sum_s M_s (x)_{j != i} Psi_j M_s^T for the mode-i unfoldings M_s,
/// symmetrized.
Eigen::MatrixXd block_statistic(const SampleSet& samples, const KroneckerPrecision& precision,
                                std::size_t factor);

/// Replaces Psi_i by its block maximizer (m n / d_i) S_i^{-1}. `factor` is
/// zero-based. Throws kDegenerateStatistic when the smallest eigenvalue of S_i
/// is below 1e-12 times the largest.
KroneckerPrecision flip_flop_step(const SampleSet& samples, const KroneckerPrecision& precision,
                                  std::size_t factor);

/// max_i ||S_i - (m n / d_i) Psi_i^{-1}||_F / ||S_i||_F; zero at a stationary point.
double stationarity_residual(const SampleSet& samples, const KroneckerPrecision& precision);

/// Rescales so det Psi_i = 1 for i >= 2, absorbing the scalars into Psi_1.
KroneckerPrecision gauge_fix(const KroneckerPrecision& precision);

/// Largest over eigenvalues ratio max/min of any factor.
double max_condition_number(const KroneckerPrecision& precision);

enum class FitStatus { kConverged, kDiverged, kMaxIterations, kDegenerateStatistic };

std::string_view to_string(FitStatus status);

struct FitOptions {
  /// Converged when |l_new - l_old| <= tol * max(1, |l_old|) over a sweep.
  double tol = 1e-10;
  /// When set, convergence also needs every gauge-fixed factor to move by at
  /// most this relative Frobenius distance over the sweep. The likelihood
  /// change is quadratic in the parameter error, so this is the tighter test.
  std::optional<double> step_tol;
  /// Convergence also needs stationarity_residual <= this at the endpoint.
  double stationarity_tol = 1e-7;
  std::uint64_t max_iter = 10'000;
  /// Diverged once l - l_initial exceeds this; defaults to 1e3 (1 + |l_initial|).
  std::optional<double> divergence_bound;
  double max_condition = 1e12;
};

struct FitReport {
  FitStatus status = FitStatus::kMaxIterations;
  double loglik = 0.0;
  std::uint64_t iterations = 0;  // full sweeps performed
  std::optional<KroneckerPrecision> factors;  // absent on Diverged / DegenerateStatistic
  std::vector<double> loglik_history;  // initial value, then one entry per sweep
  std::string detail;
};

/// Flip-flop block-coordinate ascent, factors updated in order 1..k.
///
/// A block statistic S_i with smallest eigenvalue below 1e-12 times its largest
/// certifies that l is unbounded along Psi_i + t v v^T (v in the near-kernel),
/// so it is reported as Diverged. An S_i that is zero or non-finite is reported
/// as DegenerateStatistic.
FitReport fit_mle(const SampleSet& samples, const KroneckerPrecision& init, const FitOptions& options = {});

/// Relative Frobenius distance ||a - b|| / max(||a||, ||b||).
double relative_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Relative distance between two log-likelihood values.
double relative_gap(double a, double b);

/// Desk-scale limit on n = d_1 ... d_k for verify_datum.
inline constexpr std::uint64_t kDeskScaleLimit = 4096;

struct VerifyOptions {
  std::uint64_t trials = 20;
  std::uint64_t restarts = 4;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
  FitOptions fit = [] {
    FitOptions f;
    f.tol = 1e-12;
    f.step_tol = 1e-9;
    return f;
  }();
  double agree_tol = 1e-6;      // gauge-fixed factors, relative Frobenius
  double loglik_tol = 1e-8;     // final log-likelihoods, relative
  double spread_floor = 1e-3;   // non-uniqueness witness, relative Frobenius
  double diverged_fraction = 0.95;
};

struct TrialResult {
  std::uint64_t data_seed = 0;
  std::vector<FitStatus> statuses;
  std::vector<double> logliks;  // final value per restart
  std::vector<std::uint64_t> iterations;
  std::size_t converged = 0;
  std::size_t diverged = 0;
  std::size_t max_iterations = 0;
  std::size_t degenerate = 0;
  double max_residual = 0.0;       // stationarity residual over converged restarts
  double factor_spread = 0.0;      // max relative Frobenius gap of gauge-fixed factors
  double loglik_spread = 0.0;      // max relative gap of final log-likelihoods
  bool restarts_agree = false;     // factor_spread <= agree_tol and all converged
  std::optional<double> classical_error;  // k = 1 only: distance to m (sum Y Y^T)^{-1}
};

struct ClauseCheck {
  std::string clause;
  bool predicted = false;
  bool observed = false;
  bool hard = true;
  std::string detail;

  bool agrees() const { return predicted == observed; }
};

struct VerificationReport {
  Datum datum;
  StabilityClass predicted_class = StabilityClass::kUnstable;
  MleProfile predicted;
  std::vector<TrialResult> trials;
  std::vector<ClauseCheck> clauses;

  std::size_t diverged_trials() const;       // every restart diverged
  std::size_t converged_trials() const;      // every restart converged
  std::size_t non_unique_trials(double spread_floor) const;
  bool hard_clauses_agree() const;
  /// True when every fit of every trial ended in DegenerateStatistic.
  bool numerical_failure() const;
};

/// Fits `restarts` random initializations on each of `trials` standard-normal
/// data sets and compares the outcome with mle_profile(datum). Throws
/// kDeskScaleExceeded when n > kDeskScaleLimit and kInvalidDatum when
/// trials < 1 or restarts < 2.
VerificationReport verify_datum(const Datum& datum, const VerifyOptions& options);

/// Same as verify_datum for a single given data set.
VerificationReport verify_samples(const SampleSet& samples, const VerifyOptions& options);

}  // namespace tnm
