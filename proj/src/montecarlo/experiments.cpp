#include "girko/montecarlo/experiments.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "girko/linalg/decompositions.hpp"
#include "girko/montecarlo/parallel.hpp"
#include "girko/stats/spectral_stats.hpp"

namespace girko::montecarlo {
namespace {

void require_trials(std::size_t trials, std::size_t minimum, const char* who) {
  if (trials < minimum)
    throw InvalidParameter(std::string(who) + ": need at least " + std::to_string(minimum) +
                           " trials");
}

ComplexMatrix draw(const ensembles::EnsembleSpec& spec, const ComplexMatrix& a, cplx z,
                   std::uint64_t seed, std::size_t trial) {
  auto b = ensembles::sample_matrix(spec, {seed, trial});
  b += a;
  return shifted(std::move(b), z);
}

double mean_of(const RealVector& x) {
  return x.empty() ? 0.0 : std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_sd(const RealVector& x, double mean) {
  if (x.size() < 2) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(x.size() - 1));
}

}  // namespace

void check_failure_rate(std::size_t failures, std::size_t trials, const char* who) {
  if (trials == 0) return;
  if (static_cast<double>(failures) > kMaxFailureRate * static_cast<double>(trials))
    throw NumericalFailure(std::string(who) + ": " + std::to_string(failures) + " of " +
                           std::to_string(trials) + " trials failed numerically");
}

Interval clopper_pearson(std::size_t k, std::size_t n, double alpha) {
  if (n == 0 || k > n) throw InvalidParameter("clopper_pearson: need 0 <= k <= n, n > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("clopper_pearson: alpha in (0, 1)");
  const double kd = static_cast<double>(k), nd = static_cast<double>(n);
  Interval ci;
  ci.lo = k == 0 ? 0.0 : boost::math::ibeta_inv(kd, nd - kd + 1.0, alpha / 2.0);
  ci.hi = k == n ? 1.0 : boost::math::ibeta_inv(kd + 1.0, nd - kd, 1.0 - alpha / 2.0);
  return ci;
}

double median_of_means(const RealVector& x, std::size_t blocks) {
  if (x.empty()) throw InsufficientData("median_of_means: empty sample");
  const std::size_t b = std::max<std::size_t>(1, std::min(blocks, x.size()));
  RealVector means(b);
  for (std::size_t i = 0; i < b; ++i) {
    const std::size_t lo = i * x.size() / b, hi = (i + 1) * x.size() / b;
    means[i] = std::accumulate(x.begin() + lo, x.begin() + hi, 0.0) / static_cast<double>(hi - lo);
  }
  std::sort(means.begin(), means.end());
  return b % 2 ? means[b / 2] : 0.5 * (means[b / 2 - 1] + means[b / 2]);
}

double inverse_gamma2_cdf(double y) {
  if (!(y > 0.0)) return 0.0;
  if (std::isinf(y)) return 1.0;
  const double u = 1.0 / y;
  return (1.0 + u) * std::exp(-u);
}

// ---- tails ----------------------------------------------------------------

void TailConfig::validate() const {
  ensembles::validate(ensemble);
  require_trials(trials, 100, "tails");
  if (k == 0 || k > ensemble.n) throw InvalidParameter("tails: k must lie in 1..N");
  if (s_grid.empty()) throw InvalidParameter("tails: empty s grid");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > 0.0 && s_grid[i] <= 2.0)) throw InvalidParameter("tails: s grid must lie in (0, 2]");
    if (i > 0 && !(s_grid[i] > s_grid[i - 1])) throw InvalidParameter("tails: s grid must ascend");
  }
}

double expected_tail_exponent(const TailConfig& cfg) {
  const double k2 = static_cast<double>(cfg.k * cfg.k);
  if (cfg.ensemble.is_complex()) return 2.0 * k2;
  if (cfg.k == 1) {
    const auto a = ensembles::build_shift(cfg.shift, cfg.ensemble.n);
    bool real_shift = cfg.z.imag() == 0.0;
    for (auto v : a.storage()) real_shift = real_shift && v.imag() == 0.0;
    return real_shift ? 1.0 : 2.0;
  }
  return k2;
}

std::vector<TailRow> tabulate_tail(const RealVector& values, const RealVector& s_grid) {
  RealVector sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<TailRow> rows;
  const std::size_t n = sorted.size();
  for (double s : s_grid) {
    TailRow row;
    row.s = s;
    row.count = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), s) - sorted.begin());
    row.trials = n;
    row.p_hat = n ? static_cast<double>(row.count) / static_cast<double>(n) : 0.0;
    if (n) {
      const auto ci = clopper_pearson(row.count, n);
      row.ci_lo = ci.lo;
      row.ci_hi = ci.hi;
    }
    rows.push_back(row);
  }
  return rows;
}

TailEstimate run_tail(const TailConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.ensemble.n;
  const auto a = ensembles::build_shift(cfg.shift, n);
  struct Out {
    double value;
    bool checked;
    bool interlaces;
  };
  auto res = parallel_trials<Out>(0, cfg.trials, cfg.workers, [&](std::size_t t) {
    const auto b = draw(cfg.ensemble, a, cfg.z, cfg.master_seed, t);
    const auto sv = linalg::singular_values(b);
    Out o{static_cast<double>(n) * sv[cfg.k - 1], false, true};
    if (t % 100 == 0 && n >= 2) {
      o.checked = true;
      o.interlaces = stats::interlacing_report(b, {}, 0).holds;
    }
    return o;
  });
  check_failure_rate(res.failures, cfg.trials, "tails");

  TailEstimate est;
  est.trials = cfg.trials;
  est.failures = res.failures;
  for (const auto& v : res.values) {
    if (!v) continue;
    est.values.push_back(v->value);
    est.interlacing_checks += v->checked ? 1 : 0;
    est.interlacing_violations += v->checked && !v->interlaces ? 1 : 0;
  }
  est.rows = tabulate_tail(est.values, cfg.s_grid);
  return est;
}

SlopeFit fit_slope(const std::vector<TailRow>& rows, double s_lo, double s_hi) {
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  SlopeFit fit;
  fit.s_lo = s_lo;
  fit.s_hi = s_hi;
  for (const auto& r : rows) {
    if (r.s < s_lo || r.s > s_hi || r.count < 5 || r.count >= r.trials) continue;
    const double p = r.p_hat;
    const double w = p * static_cast<double>(r.trials) / (1.0 - p);
    const double x = std::log(r.s), y = std::log(p);
    sw += w, swx += w * x, swy += w * y, swxx += w * x * x, swxy += w * x * y;
    ++fit.points;
  }
  if (fit.points < 4)
    throw InsufficientData("fit_slope: fewer than 4 grid points with count >= 5 in window");
  const double det = sw * swxx - swx * swx;
  if (!(det > 0.0)) throw InsufficientData("fit_slope: degenerate window");
  fit.slope = (sw * swxy - swx * swy) / det;
  fit.intercept = (swy - fit.slope * swx) / sw;
  fit.stderr_ = std::sqrt(sw / det);
  return fit;
}

std::pair<double, double> default_fit_window(const std::vector<TailRow>& rows) {
  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (const auto& r : rows) {
    if (r.s > 1.0) break;
    if (r.trials && static_cast<double>(r.count) >= 5.0) {
      if (!found) lo = r.s;
      found = true;
      hi = r.s;
    }
  }
  if (!found) throw InsufficientData("default_fit_window: no grid point with count >= 5 and s <= 1");
  return {lo, hi};
}

// ---- Wegner ---------------------------------------------------------------

WegnerEstimate run_wegner(const WegnerConfig& cfg) {
  ensembles::validate(cfg.ensemble);
  require_trials(cfg.trials, 1, "wegner");
  const std::size_t n = cfg.ensemble.n;
  const double nd = static_cast<double>(n);
  if (!(cfg.r >= 0.0) || cfg.r > 1.0 / std::sqrt(nd) * (1.0 + 1e-12))
    throw InvalidParameter("wegner: r must lie in [0, N^{-1/2}]");
  const auto a = ensembles::build_shift(cfg.shift, n);
  auto res = parallel_trials<double>(0, cfg.trials, cfg.workers, [&](std::size_t t) {
    auto b = ensembles::sample_matrix(cfg.ensemble, {cfg.master_seed, t});
    b += a;
    double count = 0.0;
    for (auto s : linalg::eigenvalues(b)) count += std::abs(s - cfg.z) < cfg.r ? 1.0 : 0.0;
    return count;
  });
  check_failure_rate(res.failures, cfg.trials, "wegner");

  RealVector counts;
  for (const auto& v : res.values)
    if (v) counts.push_back(*v);
  WegnerEstimate est;
  est.z = cfg.z;
  est.r = cfg.r;
  est.trials = cfg.trials;
  est.failures = res.failures;
  est.mean_count = mean_of(counts);
  const double scale = nd * cfg.r * cfg.r;
  const double half = 1.959963984540054 * sample_sd(counts, est.mean_count) /
                      std::sqrt(static_cast<double>(std::max<std::size_t>(1, counts.size())));
  if (scale > 0.0) {
    est.normalized_density = est.mean_count / scale;
    est.ci = {std::max(0.0, est.mean_count - half) / scale, (est.mean_count + half) / scale};
  }
  return est;
}

// ---- overlaps -------------------------------------------------------------

bool Domain::contains(cplx z) const {
  const cplx d = z - center;
  if (kind == Kind::Disk) return std::abs(d) < size;
  return std::abs(d.real()) < size && std::abs(d.imag()) < size;
}

double Domain::area() const {
  return kind == Kind::Disk ? std::numbers::pi * size * size : 4.0 * size * size;
}

double Domain::mean_one_minus_abs2() const {
  // E|z|^2 = |c|^2 + E|z - c|^2 over the domain.
  const double spread = kind == Kind::Disk ? size * size / 2.0 : 2.0 * size * size / 3.0;
  return 1.0 - std::norm(center) - spread;
}

namespace {

struct Enclosed {
  ComplexVector sigma;
  RealVector overlap;
};

Enclosed enclosed_overlaps(const ComplexMatrix& b, const Domain& d) {
  const auto dec = linalg::complex_eig(b);
  const auto o = stats::overlaps(dec);
  Enclosed e;
  for (std::size_t i = 0; i < dec.sigma.size(); ++i) {
    if (!d.contains(dec.sigma[i])) continue;
    e.sigma.push_back(dec.sigma[i]);
    e.overlap.push_back(o.diagonal(i));
  }
  return e;
}

}  // namespace

OverlapReport run_overlap_sum(const OverlapConfig& cfg) {
  ensembles::validate(cfg.ensemble);
  require_trials(cfg.trials, 20, "overlaps");
  if (!(cfg.domain.size > 0.0)) throw InvalidParameter("overlaps: domain size must be positive");
  const std::size_t n = cfg.ensemble.n;
  const double nd = static_cast<double>(n);
  const auto a = ensembles::build_shift(cfg.shift, n);
  auto res = parallel_trials<Enclosed>(0, cfg.trials, cfg.workers, [&](std::size_t t) {
    auto b = ensembles::sample_matrix(cfg.ensemble, {cfg.master_seed, t});
    b += a;
    return enclosed_overlaps(b, cfg.domain);
  });
  check_failure_rate(res.failures, cfg.trials, "overlaps");

  OverlapReport rep;
  rep.domain = cfg.domain;
  rep.trials = cfg.trials;
  rep.failures = res.failures;
  RealVector all;
  for (const auto& v : res.values) {
    if (!v) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < v->overlap.size(); ++i) {
      sum += v->overlap[i];
      all.push_back(v->overlap[i]);
      const double w = 1.0 - std::norm(v->sigma[i]);
      if (w > 0.0) rep.normalized.push_back(v->overlap[i] / (nd * w));
    }
    rep.per_trial_sum.push_back(sum);
    rep.per_trial_count.push_back(v->overlap.size());
  }
  rep.eigenvalues = all.size();
  rep.mean_sum = mean_of(rep.per_trial_sum);
  rep.mom_sum = median_of_means(rep.per_trial_sum);
  if (!all.empty()) {
    rep.conditional_mean = mean_of(all);
    rep.conditional_mom = median_of_means(all);
  }
  rep.baseline = nd * cfg.domain.mean_one_minus_abs2();
  return rep;
}

ShapeReport run_overlap_shape(const ShapeConfig& cfg) {
  ensembles::validate(cfg.ensemble);
  if (!cfg.ensemble.is_complex()) throw InvalidParameter("overlap-shape: needs a complex ensemble");
  if (std::abs(cfg.z) > 0.5) throw InvalidParameter("overlap-shape: |z| must be at most 0.5");
  if (cfg.samples < 500) throw InsufficientSamples("overlap-shape: need at least 500 samples");
  if (!(cfg.window > 0.0)) throw InvalidParameter("overlap-shape: window must be positive");
  const double nd = static_cast<double>(cfg.ensemble.n);
  const Domain d{Domain::Kind::Disk, cfg.z, cfg.window};

  ShapeReport rep;
  const std::size_t chunk = 256, max_trials = 100 * cfg.samples;
  std::size_t first = 0;
  while (rep.samples.size() < cfg.samples) {
    if (first >= max_trials)
      throw InsufficientSamples("overlap-shape: window too sparse to collect the samples");
    auto res = parallel_trials<Enclosed>(first, chunk, cfg.workers, [&](std::size_t t) {
      return enclosed_overlaps(ensembles::sample_matrix(cfg.ensemble, {cfg.master_seed, t}), d);
    });
    for (std::size_t i = 0; i < chunk && rep.samples.size() < cfg.samples; ++i) {
      ++rep.trials_used;
      const auto& v = res.values[i];
      if (!v) {
        ++rep.failures;
        continue;
      }
      for (std::size_t j = 0; j < v->overlap.size() && rep.samples.size() < cfg.samples; ++j)
        rep.samples.push_back(v->overlap[j] / (nd * (1.0 - std::norm(v->sigma[j]))));
    }
    first += chunk;
  }
  check_failure_rate(rep.failures, rep.trials_used, "overlap-shape");
  rep.ks = ks_distance(rep.samples, inverse_gamma2_cdf);
  return rep;
}

// ---- real eigenvalues and resolvent moments ----------------------------------

RealCountReport run_real_count(const RealCountConfig& cfg) {
  ensembles::validate(cfg.ensemble);
  require_trials(cfg.trials, 2, "real-count");
  auto res = parallel_trials<std::size_t>(0, cfg.trials, cfg.workers, [&](std::size_t t) {
    const auto x = ensembles::sample_matrix(cfg.ensemble, {cfg.master_seed, t});
    const double tol = 1e-9 * linalg::operator_norm(x);
    std::size_t c = 0;
    for (auto s : linalg::eigenvalues(x)) c += std::abs(s.imag()) <= tol ? 1 : 0;
    return c;
  });
  check_failure_rate(res.failures, cfg.trials, "real-count");

  RealCountReport rep;
  rep.trials = cfg.trials;
  rep.failures = res.failures;
  RealVector c;
  for (const auto& v : res.values)
    if (v) {
      rep.counts.push_back(*v);
      c.push_back(static_cast<double>(*v));
    }
  rep.mean_count = mean_of(c);
  const double root = std::sqrt(static_cast<double>(cfg.ensemble.n));
  rep.ratio = rep.mean_count / root;
  rep.stderr_ = sample_sd(c, rep.mean_count) / std::sqrt(static_cast<double>(c.size())) / root;
  return rep;
}

MomentReport run_resolvent_moment(const MomentConfig& cfg) {
  ensembles::validate(cfg.ensemble);
  require_trials(cfg.trials, 2, "resolvent-moment");
  if (!(cfg.delta1 > 0.0 && cfg.delta1 <= 1.0))
    throw InvalidParameter("resolvent-moment: delta1 must lie in (0, 1]");
  const std::size_t n = cfg.ensemble.n;
  const auto a = ensembles::build_shift(cfg.shift, n);
  const double power = 2.0 - cfg.delta1;
  auto res = parallel_trials<double>(0, cfg.trials, cfg.workers, [&](std::size_t t) {
    auto b = ensembles::sample_matrix(cfg.ensemble, {cfg.master_seed, t});
    b += a;
    cplx acc = 0.0;
    for (auto s : linalg::eigenvalues(b)) acc += 1.0 / (s - cfg.z);
    return std::pow(std::abs(acc / static_cast<double>(n)), power);
  });
  check_failure_rate(res.failures, cfg.trials, "resolvent-moment");

  RealVector x;
  for (const auto& v : res.values)
    if (v) x.push_back(*v);
  MomentReport rep;
  rep.power = power;
  rep.trials = cfg.trials;
  rep.failures = res.failures;
  rep.moment = mean_of(x);
  if (cfg.bootstrap > 0 && !x.empty()) {
    std::mt19937_64 gen(cfg.master_seed ^ 0x9E3779B97F4A7C15ull);
    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    RealVector boots(cfg.bootstrap);
    for (auto& b : boots) {
      double acc = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) acc += x[pick(gen)];
      b = acc / static_cast<double>(x.size());
    }
    std::sort(boots.begin(), boots.end());
    const auto at = [&](double q) {
      return boots[std::min(boots.size() - 1, static_cast<std::size_t>(q * boots.size()))];
    };
    rep.ci = {at(0.025), at(0.975)};
  }
  return rep;
}

}  // namespace girko::montecarlo
