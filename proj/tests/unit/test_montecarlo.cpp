#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "girko/montecarlo/experiments.hpp"
#include "girko/montecarlo/parallel.hpp"

using namespace girko;
using namespace girko::montecarlo;

namespace {

// P[Bin(n, p) <= k] by direct summation.
double binomial_cdf(std::size_t k, std::size_t n, double p) {
  double acc = 0.0;
  for (std::size_t j = 0; j <= k; ++j)
    acc += std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
                    j * std::log(p) + (n - j) * std::log1p(-p));
  return acc;
}

// Root of a monotone function on [0, 1] by bisection.
template <typename F>
double bisect(F f, double target, bool increasing) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((f(mid) < target) == increasing ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TailConfig tail_config(const char* name, std::size_t n, std::size_t k, std::size_t trials) {
  TailConfig cfg;
  cfg.ensemble = ensembles::parse_ensemble(name, n);
  cfg.k = k;
  cfg.trials = trials;
  cfg.master_seed = 11;
  for (int i = 1; i <= 20; ++i) cfg.s_grid.push_back(0.05 * i);
  return cfg;
}

}  // namespace

TEST(ClopperPearson, EdgesAndTable) {
  EXPECT_EQ(clopper_pearson(0, 50).lo, 0.0);
  EXPECT_EQ(clopper_pearson(50, 50).hi, 1.0);
  auto ci = clopper_pearson(5, 100, 0.05);
  EXPECT_NEAR(ci.lo, 0.0164, 1e-3);
  EXPECT_NEAR(ci.hi, 0.1128, 1e-3);
  EXPECT_THROW(clopper_pearson(3, 2), InvalidParameter);
}

TEST(ClopperPearson, MatchesBinomialSumInversion) {
  for (auto [k, n] : {std::pair<std::size_t, std::size_t>{5, 100}, {1, 10}, {37, 200}, {199, 200}}) {
    auto ci = clopper_pearson(k, n, 0.05);
    // lo: P[Bin(n, p) >= k] = 0.025; hi: P[Bin(n, p) <= k] = 0.025.
    const double lo = bisect([&](double p) { return 1.0 - binomial_cdf(k - 1, n, p); }, 0.025, true);
    const double hi = k == n ? 1.0 : bisect([&](double p) { return binomial_cdf(k, n, p); }, 0.025, false);
    EXPECT_NEAR(ci.lo, lo, 1e-9) << k << "/" << n;
    EXPECT_NEAR(ci.hi, hi, 1e-9) << k << "/" << n;
  }
}

TEST(Estimators, MedianOfMeans) {
  RealVector x(100);
  for (std::size_t i = 0; i < 100; ++i) x[i] = static_cast<double>(i);
  EXPECT_NEAR(median_of_means(x, 20), 49.5, 1e-12);
  x[3] = 1e9;  // one wild value moves one block only
  EXPECT_NEAR(median_of_means(x, 20), 49.5, 5.0);
  EXPECT_NEAR(median_of_means({2.0, 4.0}, 20), 3.0, 1e-15);
  EXPECT_THROW(median_of_means({}), InsufficientData);
}

TEST(Estimators, InverseGammaCdfMatchesQuadrature) {
  // P[1/G <= y] = P[G >= 1/y] = int_{1/y}^inf g e^{-g} dg.
  for (double y : {0.05, 0.3, 1.0, 2.5, 10.0, 100.0}) {
    const double tail = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [](double g) { return g * std::exp(-g); }, 1.0 / y, 1.0 / y + 80.0, 15, 1e-14);
    EXPECT_NEAR(inverse_gamma2_cdf(y), tail, 1e-10) << y;
  }
  EXPECT_NEAR(inverse_gamma2_cdf(1e12), 1.0, 1e-12);
  EXPECT_EQ(inverse_gamma2_cdf(0.0), 0.0);
}

TEST(Estimators, KolmogorovSmirnov) {
  EXPECT_NEAR(ks_distance({0.5}, [](double x) { return x; }), 0.5, 1e-15);
  // Exact inverse-transform sample: 1/G with G = -log(u1 u2).
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealVector s(20000);
  for (auto& v : s) v = 1.0 / (-std::log(u(gen)) - std::log(u(gen)));
  EXPECT_LT(ks_distance(s, inverse_gamma2_cdf), 0.015);
  RealVector shifted = s;
  for (auto& v : shifted) v *= 2.0;
  EXPECT_GT(ks_distance(shifted, inverse_gamma2_cdf), 0.1);
}

TEST(FitSlope, ExactPowerLaws) {
  const std::size_t n = 1000000000000000ull;
  std::vector<TailRow> sq, cube;
  for (double s : {0.1, 0.2, 0.3, 0.5, 0.7, 0.9}) {
    auto row = [&](double p) {
      TailRow r;
      r.s = s;
      r.trials = n;
      r.count = static_cast<std::size_t>(std::llround(p * static_cast<double>(n)));
      r.p_hat = static_cast<double>(r.count) / static_cast<double>(n);
      return r;
    };
    sq.push_back(row(s * s));
    cube.push_back(row(0.3 * s * s * s));
  }
  auto f2 = fit_slope(sq, 0.0, 1.0);
  EXPECT_NEAR(f2.slope, 2.0, 1e-9);
  EXPECT_NEAR(f2.intercept, 0.0, 1e-9);
  auto f3 = fit_slope(cube, 0.0, 1.0);
  EXPECT_NEAR(f3.slope, 3.0, 1e-9);
  EXPECT_NEAR(f3.intercept, std::log(0.3), 1e-9);
  EXPECT_EQ(f3.points, 6u);
  EXPECT_THROW(fit_slope(sq, 0.45, 1.0), InsufficientData);
}

TEST(Tails, ComplexGinibreMatchesExactLaw) {
  // For square complex Gaussian matrices N lambda_1^2 is exactly Exp(1).
  auto cfg = tail_config("ginibre-complex", 8, 1, 4000);
  auto est = run_tail(cfg);
  for (const auto& r : est.rows) {
    const double p = 1.0 - std::exp(-r.s * r.s);
    const double sd = std::sqrt(p * (1 - p) / r.trials);
    EXPECT_NEAR(r.p_hat, p, 4.5 * sd + 1e-12) << r.s;
  }
}

TEST(Tails, InvariantsAndDeterminism) {
  auto cfg = tail_config("ginibre-real", 12, 2, 600);
  auto a = run_tail(cfg);
  cfg.workers = 3;
  auto b = run_tail(cfg);
  EXPECT_EQ(a.values, b.values);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].count, b.rows[i].count);
    EXPECT_LE(a.rows[i].ci_lo, a.rows[i].p_hat);
    EXPECT_GE(a.rows[i].ci_hi, a.rows[i].p_hat);
    if (i) {
      EXPECT_GE(a.rows[i].p_hat, a.rows[i - 1].p_hat);
    }
  }
  EXPECT_EQ(a.interlacing_checks, 6u);
  EXPECT_EQ(a.interlacing_violations, 0u);
  cfg.k = 0;
  EXPECT_THROW(run_tail(cfg), InvalidParameter);
  cfg.k = 1;
  cfg.trials = 50;
  EXPECT_THROW(run_tail(cfg), InvalidParameter);
  cfg.trials = 200;
  cfg.s_grid = {0.5, 0.4};
  EXPECT_THROW(run_tail(cfg), InvalidParameter);
}

TEST(Tails, BootstrapStderrAgreesWithAnalytic) {
  auto cfg = tail_config("ginibre-complex", 16, 1, 3000);
  auto est = run_tail(cfg);
  const auto fit = fit_slope(est.rows, 0.1, 0.5);
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<std::size_t> pick(0, est.values.size() - 1);
  RealVector slopes;
  for (int b = 0; b < 200; ++b) {
    RealVector res(est.values.size());
    for (auto& v : res) v = est.values[pick(gen)];
    slopes.push_back(fit_slope(tabulate_tail(res, cfg.s_grid), 0.1, 0.5).slope);
  }
  double m = 0.0, v = 0.0;
  for (double s : slopes) m += s;
  m /= slopes.size();
  for (double s : slopes) v += (s - m) * (s - m);
  const double boot = std::sqrt(v / (slopes.size() - 1));
  EXPECT_LE(boot, 2.0 * fit.stderr_);
  EXPECT_GE(boot, 0.5 * fit.stderr_);
}

TEST(Tails, ExpectedExponents) {
  auto cfg = tail_config("ginibre-complex", 8, 2, 100);
  EXPECT_EQ(expected_tail_exponent(cfg), 8.0);
  cfg.ensemble = ensembles::parse_ensemble("ginibre-real", 8);
  EXPECT_EQ(expected_tail_exponent(cfg), 4.0);
  cfg.k = 1;
  EXPECT_EQ(expected_tail_exponent(cfg), 1.0);
  cfg.z = cplx(0.0, 0.3);
  EXPECT_EQ(expected_tail_exponent(cfg), 2.0);
}

TEST(Tails, DefaultWindow) {
  auto cfg = tail_config("ginibre-complex", 8, 1, 1000);
  cfg.s_grid.push_back(1.5);
  auto est = run_tail(cfg);
  auto [lo, hi] = default_fit_window(est.rows);
  EXPECT_LE(hi, 1.0);
  for (const auto& r : est.rows)
    if (r.s >= lo && r.s <= hi) {
      EXPECT_GE(r.count, 5u);
    }
}

TEST(Wegner, OutsideSpectrumAndZeroRadius) {
  WegnerConfig cfg;
  cfg.ensemble = ensembles::parse_ensemble("ginibre-complex", 32);
  cfg.trials = 200;
  cfg.master_seed = 3;
  cfg.z = 2.0;
  cfg.r = std::pow(32.0, -0.75);
  EXPECT_LE(run_wegner(cfg).mean_count, 1e-3);
  cfg.z = 0.0;
  cfg.r = 0.0;
  auto zero = run_wegner(cfg);
  EXPECT_EQ(zero.mean_count, 0.0);
  cfg.r = 0.5;
  EXPECT_THROW(run_wegner(cfg), InvalidParameter);
}

TEST(Wegner, DensityNearOneInBulk) {
  WegnerConfig cfg;
  cfg.ensemble = ensembles::parse_ensemble("ginibre-complex", 32);
  cfg.trials = 1500;
  cfg.master_seed = 4;
  cfg.r = 1.0 / std::sqrt(32.0);
  auto est = run_wegner(cfg);
  EXPECT_NEAR(est.normalized_density, 1.0, 0.15);
  EXPECT_LE(est.ci.lo, est.normalized_density);
  EXPECT_GE(est.ci.hi, est.normalized_density);
}

TEST(Overlaps, DomainGeometry) {
  Domain disk{Domain::Kind::Disk, cplx(0.1, 0.2), 0.3};
  Domain square{Domain::Kind::Square, cplx(-0.2, 0.0), 0.25};
  EXPECT_NEAR(disk.area(), std::numbers::pi * 0.09, 1e-15);
  EXPECT_NEAR(square.area(), 0.25, 1e-15);
  // Midpoint-grid oracle for the average of 1 - |z|^2.
  for (const auto& d : {disk, square}) {
    double acc = 0.0, cnt = 0.0;
    const int m = 800;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const cplx z = d.center + d.size * cplx(-1.0 + (2 * i + 1.0) / m, -1.0 + (2 * j + 1.0) / m);
        if (!d.contains(z)) continue;
        acc += 1.0 - std::norm(z);
        cnt += 1.0;
      }
    EXPECT_NEAR(d.mean_one_minus_abs2(), acc / cnt, 1e-5);
  }
}

TEST(Overlaps, NearNormalRegime) {
  // Overlaps are scale invariant, so X + 1000 D behaves like D + 1e-3 X.
  OverlapConfig cfg;
  cfg.ensemble = ensembles::parse_ensemble("ginibre-complex", 8);
  ComplexVector d;
  for (int i = 0; i < 8; ++i) d.push_back(1000.0 * i);
  cfg.shift = ensembles::ShiftSpec::from_diagonal(d);
  cfg.domain = {Domain::Kind::Disk, 0.0, 3500.0};
  cfg.trials = 40;
  auto rep = run_overlap_sum(cfg);
  EXPECT_EQ(rep.eigenvalues, 4u * 40u);
  for (std::size_t t = 0; t < rep.per_trial_sum.size(); ++t) {
    EXPECT_NEAR(rep.per_trial_sum[t], 4.0, 1e-3);
    EXPECT_GE(rep.per_trial_sum[t], static_cast<double>(rep.per_trial_count[t]) - 1e-12);
  }
}

TEST(Overlaps, GinibreConditionalMeanSmall) {
  OverlapConfig cfg;
  cfg.ensemble = ensembles::parse_ensemble("ginibre-complex", 24);
  cfg.domain = {Domain::Kind::Disk, 0.0, 0.4};
  cfg.trials = 400;
  cfg.master_seed = 8;
  auto rep = run_overlap_sum(cfg);
  for (std::size_t t = 0; t < rep.per_trial_sum.size(); ++t)
    EXPECT_GE(rep.per_trial_sum[t], static_cast<double>(rep.per_trial_count[t]) - 1e-9);
  EXPECT_NEAR(rep.conditional_mean / rep.baseline, 1.0, 0.2);
  EXPECT_GT(rep.mom_sum, 0.0);
  EXPECT_EQ(rep.per_trial_sum.size(), 400u);
}

TEST(OverlapShape, ValidationAndDeterminism) {
  ShapeConfig cfg;
  cfg.ensemble = ensembles::parse_ensemble("ginibre-complex", 16);
  cfg.samples = 499;
  EXPECT_THROW(run_overlap_shape(cfg), InsufficientSamples);
  cfg.samples = 600;
  cfg.z = 0.6;
  EXPECT_THROW(run_overlap_shape(cfg), InvalidParameter);
  cfg.z = 0.0;
  cfg.ensemble = ensembles::parse_ensemble("ginibre-real", 16);
  EXPECT_THROW(run_overlap_shape(cfg), InvalidParameter);
  cfg.ensemble = ensembles::parse_ensemble("ginibre-complex", 16);
  cfg.window = 0.3;
  auto a = run_overlap_shape(cfg);
  cfg.workers = 4;
  auto b = run_overlap_shape(cfg);
  EXPECT_EQ(a.samples.size(), 600u);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.ks, b.ks);
  EXPECT_LT(a.ks, 0.15);
}

TEST(RealCount, TwoByTwoAndComplex) {
  RealCountConfig cfg;
  cfg.ensemble = ensembles::parse_ensemble("ginibre-real", 2);
  cfg.trials = 4000;
  cfg.master_seed = 5;
  auto rep = run_real_count(cfg);
  double both = 0.0;
  for (auto c : rep.counts) {
    EXPECT_TRUE(c == 0 || c == 2);
    both += c == 2 ? 1.0 : 0.0;
  }
  // P[both real] = 1/sqrt(2) for a 2x2 real Gaussian matrix.
  EXPECT_NEAR(both / cfg.trials, 1.0 / std::sqrt(2.0), 0.03);
  cfg.ensemble = ensembles::parse_ensemble("ginibre-complex", 16);
  cfg.trials = 200;
  EXPECT_LE(run_real_count(cfg).ratio, 0.05);
}

TEST(ResolventMoment, OutsideDiskAndOrdering) {
  MomentConfig cfg;
  cfg.ensemble = ensembles::parse_ensemble("ginibre-complex", 32);
  cfg.z = 2.0;
  cfg.trials = 500;
  cfg.master_seed = 6;
  auto rep = run_resolvent_moment(cfg);
  EXPECT_NEAR(rep.moment, std::pow(0.5, 1.5), 0.05);
  EXPECT_LE(rep.ci.lo, rep.moment);
  EXPECT_GE(rep.ci.hi, rep.moment);
  cfg.z = 0.0;
  auto m5 = run_resolvent_moment(cfg);
  cfg.delta1 = 0.1;
  auto m1 = run_resolvent_moment(cfg);
  EXPECT_GE(std::pow(m1.moment, 1.0 / 1.9), std::pow(m5.moment, 1.0 / 1.5) * (1 - 1e-12));
  cfg.delta1 = 0.0;
  EXPECT_THROW(run_resolvent_moment(cfg), InvalidParameter);
}

TEST(Parallel, FailuresAreCountedAndRateEnforced) {
  auto res = parallel_trials<int>(0, 2000, 4, [](std::size_t t) {
    if (t % 1000 == 7) throw NonConvergence("synthetic");
    return static_cast<int>(t);
  });
  EXPECT_EQ(res.failures, 2u);
  EXPECT_FALSE(res.values[7].has_value());
  EXPECT_EQ(*res.values[8], 8);
  EXPECT_NO_THROW(check_failure_rate(res.failures, 2000, "t"));
  EXPECT_THROW(check_failure_rate(3, 2000, "t"), NumericalFailure);
  EXPECT_THROW((parallel_trials<int>(0, 10, 2,
                                     [](std::size_t) -> int { throw InvalidParameter("bad"); })),
               InvalidParameter);
}
