#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "girko/ensembles/ensembles.hpp"
#include "girko/hermitization/hermitization.hpp"
#include "girko/mde/mde.hpp"
#include "helpers.hpp"

using namespace girko;
using namespace girko::mde;
using girko::testing::haar_unitary;
using girko::testing::random_complex;

namespace {

constexpr double kPi = std::numbers::pi;

cplx semicircle_m(double eta) { return cplx(0.0, (-eta + std::sqrt(eta * eta + 4.0)) / 2.0); }

// Integral of sqrt(4 - t^2) / (2 pi) over [0, x].
double semicircle_cdf(double x) {
  return (x * std::sqrt(4.0 - x * x) / 2.0 + 2.0 * std::asin(x / 2.0)) / (2.0 * kPi);
}

}  // namespace

TEST(Mde, SemicircleClosedForm) {
  const RealVector s(10, 0.0);
  for (double eta : {1e-6, 1e-3, 0.1, 1.0, 7.0}) {
    auto sol = solve_mde(s, cplx(0.0, eta));
    EXPECT_NEAR(std::abs(sol.m - semicircle_m(eta)), 0.0, 1e-11) << eta;
    EXPECT_LE(sol.residual, 1e-12);
    EXPECT_GT(sol.m.imag(), 0.0);
  }
  auto a = ComplexMatrix(6, 6);
  EXPECT_NEAR(solve_mde(a, 0.0, cplx(0.0, 1e-6)).scdos, 1.0 / kPi, 1e-6);
}

TEST(Mde, UnitaryShiftMatchesCubicRoot) {
  // s_i = 1: m (w + m)^2 + w = 0, i.e. m^3 + 2w m^2 + w^2 m + w = 0.
  const auto u = haar_unitary(6, 3);
  for (cplx w : {cplx(0.3, 0.2), cplx(-1.1, 0.05), cplx(0.0, 2.0), cplx(2.5, 0.01)}) {
    auto sol = solve_mde(u, 0.0, w);
    ComplexMatrix companion{{-2.0 * w, -w * w, -w}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
    auto roots = linalg::eigenvalues(companion);
    double best = 1e300;
    cplx root;
    for (auto r : roots) {
      if (std::abs(r - sol.m) < best) {
        best = std::abs(r - sol.m);
        root = r;
      }
    }
    EXPECT_LE(best, 1e-9) << w;
    EXPECT_GT(root.imag(), 0.0);
    const cplx f = sol.m * (w + sol.m) * (w + sol.m) + w;
    EXPECT_LE(std::abs(f), 1e-10);
  }
}

TEST(Mde, ResidualUnderOneMoreIteration) {
  auto a = random_complex(12, 12, 5);
  const auto s = hermitization::shifted_singular_values(a, cplx(0.4, -0.3));
  for (cplx w : {cplx(0.0, 1e-6), cplx(0.8, 1e-4), cplx(-2.0, 0.5), cplx(3.0, 1e-6)}) {
    auto sol = solve_mde(s, w);
    EXPECT_LE(std::abs(mde_map(s, w, sol.m) - sol.m), 1e-12);
    EXPECT_GT(sol.m.imag(), 0.0);
  }
  EXPECT_THROW(solve_mde(s, cplx(0.1, 0.0)), InvalidParameter);
  EXPECT_THROW(solve_mde(s, cplx(0.1, -1.0)), InvalidParameter);
}

TEST(Mde, NonConvergenceIsReported) {
  MdeOptions opt;
  opt.max_iterations = 1;
  EXPECT_THROW(solve_mde(RealVector(4, 0.3), cplx(0.2, 1e-6), opt), NonConvergence);
}

TEST(Mde, MassOneAtLargeEta) {
  auto a = random_complex(8, 8, 2);
  const double eta = 1e6;
  auto sol = solve_mde(a, cplx(0.5, 0.5), cplx(0.0, eta));
  EXPECT_NEAR(std::abs(sol.m * cplx(0.0, eta) + 1.0), 0.0, 1e-6);
}

TEST(Mde, FullMatrixIsConsistent) {
  auto a = random_complex(5, 5, 8);
  const cplx z(0.2, 0.1), w(0.3, 0.05);
  auto sol = solve_mde(a, z, w);
  auto m = mde_matrix(a, z, sol);
  cplx tr = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) tr += m(i, i);
  EXPECT_NEAR(std::abs(tr / 10.0 - sol.m), 0.0, 1e-11);
  // Im M = (M - M^dagger) / 2i is positive semidefinite.
  auto im = cplx(0.0, -0.5) * (m - adjoint(m));
  for (double v : linalg::hermitian_eigenvalues(im)) EXPECT_GE(v, -1e-12);
}

TEST(Scdos, SemicircleValues) {
  const RealVector s(16, 0.0);
  EXPECT_NEAR(scdos(s, 0.0), 1.0 / kPi, 1e-5);
  EXPECT_NEAR(scdos(s, 1.0), std::sqrt(3.0) / (2.0 * kPi), 1e-5);
  EXPECT_LE(scdos(s, 2.0), 1e-2);
  EXPECT_LE(scdos(s, -2.0), 1e-2);
  EXPECT_LE(scdos(s, 2.5), 1e-5);
  auto a = random_complex(10, 10, 4);
  for (double x : {0.1, 0.7, 1.9})
    EXPECT_NEAR(scdos(a, 0.3, x), scdos(a, 0.3, -x), 1e-10);
}

TEST(InBulk, Examples) {
  auto zero = ComplexMatrix(4, 4);
  auto q = in_bulk(zero, 0.0, 0.5);
  EXPECT_NEAR(q.value, 4.0, 1e-14);
  EXPECT_TRUE(q.in_bulk);
  for (double tau : {1.0, 1.5})
    for (cplx z : {cplx(0.0), cplx(0.1, 0.2), cplx(3.0)}) EXPECT_FALSE(in_bulk(zero, z, tau).in_bulk);
  const double tau = 0.3, radius = std::sqrt(1.0 - tau * tau);
  for (int i = -20; i <= 20; ++i)
    for (int j = -20; j <= 20; ++j) {
      const cplx z(0.06 * i, 0.06 * j);
      const double margin = std::abs(std::abs(z) - radius);
      if (margin <= 1e-6) continue;
      EXPECT_EQ(in_bulk(zero, z, tau).in_bulk, std::abs(z) < radius) << z;
    }
  EXPECT_THROW(in_bulk(zero, 0.0, 0.0), InvalidParameter);
}

TEST(CumulativeDos, SemicircleQuantilesAndMass) {
  CumulativeDos dos(RealVector(8, 0.0));
  EXPECT_NEAR(2.0 * dos.half_mass(), 1.0, 1e-4);
  for (double p : {0.01, 0.1, 0.25, 0.4, 0.49}) {
    const double x = dos.quantile(p);
    EXPECT_NEAR(semicircle_cdf(x), p, 1e-6) << p;
  }
  EXPECT_THROW(dos.quantile(0.6), QuantileOutOfSupport);
}

TEST(CumulativeDos, DeformedMassIsOne) {
  auto a = random_complex(20, 20, 12);
  auto s = hermitization::shifted_singular_values(cplx(1.5) * a, cplx(0.4, 0.2));
  CumulativeDos dos(s);
  EXPECT_NEAR(2.0 * dos.half_mass(), 1.0, 1e-4);
}

TEST(OverlapProfile, QMatchesDenseBlockTrace) {
  auto a = random_complex(6, 6, 21);
  const cplx z(0.1, -0.2), w(0.35, 0.01);
  const auto svd = hermitization::singular_system(a, z);
  auto sol = solve_mde(svd.values, w);
  const cplx q = overlap_q(svd, w, sol);
  auto m = mde_matrix(a, z, sol);
  auto im = cplx(0.0, -0.5) * (m - adjoint(m));
  cplx off = 0.0, tr = 0.0;
  for (std::size_t i = 0; i < 6; ++i) off += im(i, 6 + i);
  for (std::size_t i = 0; i < 12; ++i) tr += im(i, i);
  EXPECT_NEAR(std::abs(q - off / tr), 0.0, 1e-10);
}

TEST(OverlapProfile, SymmetricShiftGivesRealQ) {
  auto prof = overlap_profile(ComplexMatrix(32, 32), 0.0, 8);
  for (auto q : prof.q) EXPECT_LE(std::abs(q.imag()), 1e-8);
  for (std::size_t i = 1; i < prof.gamma.size(); ++i) EXPECT_LT(prof.gamma[i - 1], prof.gamma[i]);
}

TEST(OverlapProfile, LinearGrowthAtQuarterDisk) {
  const std::size_t n = 128;
  auto prof = overlap_profile(ComplexMatrix(n, n), 0.5, n / 4);
  double sx = 0, sy = 0, sxx = 0, sxy = 0, cmax = 0;
  const double k = static_cast<double>(prof.q.size());
  for (std::size_t i = 0; i < prof.q.size(); ++i) {
    const double x = prof.index_over_n[i], y = std::abs(prof.q[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    cmax = std::max(cmax, y / x);
    if (i > 0) EXPECT_LT(prof.gamma[i - 1], prof.gamma[i]);
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  EXPECT_GE(slope, 0.0);
  EXPECT_LE(cmax, 10.0);
  EXPECT_THROW(overlap_profile(ComplexMatrix(4, 4), 0.5, 5), QuantileOutOfSupport);
}

TEST(Mde, LocalLawForGinibre) {
  const std::size_t n = 128;
  const double eta = std::pow(double(n), -0.8);
  const cplx m = solve_mde(RealVector(n, 0.0), cplx(0.0, eta)).m;
  auto spec = ensembles::parse_ensemble("ginibre-complex", n);
  int good = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    auto x = ensembles::sample_matrix(spec, {77, static_cast<std::uint64_t>(t)});
    const cplx g = hermitization::resolvent_trace(x, 0.0, eta);
    good += std::abs(g - m) <= 10.0 / (n * eta) ? 1 : 0;
  }
  EXPECT_GE(good, 190);
}
