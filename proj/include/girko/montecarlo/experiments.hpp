#pragma once

// Monte Carlo experiments over X + A with reproducible per-trial seeding.
// Every run is a pure function of its config: trial t draws from
// SeedStream{seed, t} and results are folded in trial order.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "girko/ensembles/ensembles.hpp"

namespace girko::montecarlo {

// ---- estimators ----------------------------------------------------------

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Exact binomial interval at level 1 - alpha from Beta quantiles.
Interval clopper_pearson(std::size_t k, std::size_t n, double alpha = 0.05);

/// Median of the means of `blocks` contiguous blocks.
double median_of_means(const RealVector& x, std::size_t blocks = 20);

/// CDF of 1/G with G ~ Gamma(2, 1): (1 + 1/y) e^{-1/y} for y > 0.
double inverse_gamma2_cdf(double y);

/// sup |F_n - F| for a sample against a continuous CDF.
template <typename Cdf>
double ks_distance(RealVector sample, Cdf cdf);

// ---- singular value tails -------------------------------------------------

struct TailConfig {
  ensembles::EnsembleSpec ensemble;
  ensembles::ShiftSpec shift;
  cplx z{0.0, 0.0};
  std::size_t k = 1;
  RealVector s_grid;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;

  /// 1 for real, 2 for complex noise.
  int beta() const { return ensemble.is_complex() ? 2 : 1; }
  void validate() const;
};

/// Predicted exponent of P[N lambda_k <= s] at small s: beta k^2, except
/// real noise with a genuinely complex shift at k = 1, which behaves like s^2.
double expected_tail_exponent(const TailConfig& cfg);

struct TailRow {
  double s = 0.0;
  std::size_t count = 0;
  std::size_t trials = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct TailEstimate {
  std::vector<TailRow> rows;
  RealVector values;  // N lambda_k per successful trial, trial order
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::size_t interlacing_checks = 0;
  std::size_t interlacing_violations = 0;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_ = 0.0;
  std::size_t points = 0;
  double s_lo = 0.0;
  double s_hi = 0.0;
};

TailEstimate run_tail(const TailConfig& cfg);

/// Tail table for given per-trial values of N lambda_k.
std::vector<TailRow> tabulate_tail(const RealVector& values, const RealVector& s_grid);

/// Weighted least squares of log p_hat on log s over rows with
/// s in [s_lo, s_hi] and count >= 5; weights p n / (1 - p).
SlopeFit fit_slope(const std::vector<TailRow>& rows, double s_lo, double s_hi);

/// Default window: s <= 1 and p_hat >= 5 / trials.
std::pair<double, double> default_fit_window(const std::vector<TailRow>& rows);

// ---- Wegner ---------------------------------------------------------------

struct WegnerConfig {
  ensembles::EnsembleSpec ensemble;
  ensembles::ShiftSpec shift;
  cplx z{0.0, 0.0};
  double r = 0.0;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
};

struct WegnerEstimate {
  cplx z;
  double r = 0.0;
  double mean_count = 0.0;
  double normalized_density = 0.0;  // mean_count / (N r^2)
  Interval ci;                      // 95% normal interval on normalized_density
  std::size_t trials = 0;
  std::size_t failures = 0;
};

WegnerEstimate run_wegner(const WegnerConfig& cfg);

// ---- overlaps -------------------------------------------------------------

struct Domain {
  enum class Kind { Disk, Square };
  Kind kind = Kind::Disk;
  cplx center{0.0, 0.0};
  double size = 0.0;  // radius, or half side for squares

  bool contains(cplx z) const;
  double area() const;
  /// Average of 1 - |z|^2 over the domain.
  double mean_one_minus_abs2() const;
};

struct OverlapConfig {
  ensembles::EnsembleSpec ensemble;
  ensembles::ShiftSpec shift;
  Domain domain;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
};

struct OverlapReport {
  Domain domain;
  RealVector per_trial_sum;                // sum of O_ii over sigma_i in D
  std::vector<std::size_t> per_trial_count;
  double mean_sum = 0.0;
  double mom_sum = 0.0;                    // median of means, 20 blocks
  std::size_t eigenvalues = 0;             // enclosed, all trials
  double conditional_mean = 0.0;           // sum O_ii / number enclosed
  double conditional_mom = 0.0;            // median of means over per-eigenvalue O_ii
  double baseline = 0.0;                   // N * mean over D of (1 - |z|^2)
  RealVector normalized;                   // O_ii / (N (1 - |sigma_i|^2))
  std::size_t trials = 0;
  std::size_t failures = 0;
};

OverlapReport run_overlap_sum(const OverlapConfig& cfg);

struct ShapeConfig {
  ensembles::EnsembleSpec ensemble;
  cplx z{0.0, 0.0};
  double window = 0.2;  // eigenvalues with |sigma - z| <= window are used
  std::size_t samples = 0;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
};

struct ShapeReport {
  RealVector samples;  // O_ii / (N (1 - |sigma_i|^2)), trial order
  double ks = 0.0;
  std::size_t trials_used = 0;
  std::size_t failures = 0;
};

ShapeReport run_overlap_shape(const ShapeConfig& cfg);

// ---- real eigenvalues and resolvent moments ----------------------------------

struct RealCountConfig {
  ensembles::EnsembleSpec ensemble;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
};

struct RealCountReport {
  std::vector<std::size_t> counts;
  double mean_count = 0.0;
  double ratio = 0.0;  // mean_count / sqrt(N)
  double stderr_ = 0.0;
  std::size_t trials = 0;
  std::size_t failures = 0;
};

RealCountReport run_real_count(const RealCountConfig& cfg);

struct MomentConfig {
  ensembles::EnsembleSpec ensemble;
  ensembles::ShiftSpec shift;
  cplx z{0.0, 0.0};
  double delta1 = 0.5;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  std::size_t bootstrap = 200;
};

struct MomentReport {
  double power = 0.0;  // 2 - delta1
  double moment = 0.0;
  Interval ci;         // bootstrap percentile, 95%
  std::size_t trials = 0;
  std::size_t failures = 0;
};

MomentReport run_resolvent_moment(const MomentConfig& cfg);

// ---- template definitions ---------------------------------------------------

template <typename Cdf>
double ks_distance(RealVector sample, Cdf cdf) {
  if (sample.empty()) throw InsufficientSamples("ks_distance: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace girko::montecarlo
