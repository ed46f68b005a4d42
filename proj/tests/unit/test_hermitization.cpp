#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "girko/hermitization/hermitization.hpp"
#include "helpers.hpp"

using namespace girko;
using namespace girko::hermitization;
using girko::testing::haar_unitary;
using girko::testing::random_complex;
using girko::testing::random_real;

namespace {

RealVector padded_values(const ComplexMatrix& m) {
  RealVector v(m.cols() - m.rows(), 0.0);
  auto s = linalg::singular_values(m);
  v.insert(v.end(), s.begin(), s.end());
  return v;
}

}  // namespace

TEST(Hermitize, ZeroAndBlockStructure) {
  auto h = hermitize(ComplexMatrix(2, 2), 0.0);
  EXPECT_EQ(h.h.rows(), 4u);
  EXPECT_EQ(frobenius_norm(h.h), 0.0);

  auto b = random_complex(5, 5, 1);
  auto hz = hermitize(b, cplx(0.3, -0.2)).h;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(hz(i, j), cplx(0.0));
      EXPECT_EQ(hz(5 + i, 5 + j), cplx(0.0));
      EXPECT_EQ(hz(i, 5 + j), b(i, j) - (i == j ? cplx(0.3, -0.2) : cplx(0.0)));
      EXPECT_EQ(hz(5 + j, i), std::conj(hz(i, 5 + j)));
    }
}

TEST(Hermitize, ZeroMatrixSpectrumIsPlusMinusAbsZ) {
  const cplx z(0.6, 0.8);
  auto vals = linalg::hermitian_eigenvalues(hermitize(ComplexMatrix(3, 3), z).h);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(vals[i], -1.0, 1e-14);
    EXPECT_NEAR(vals[3 + i], 1.0, 1e-14);
  }
}

TEST(Hermitize, EigenvaluesArePlusMinusSingularValues) {
  auto b = random_complex(7, 7, 2);
  const cplx z(0.1, 0.4);
  auto mu = linalg::hermitian_eigenvalues(hermitize(b, z).h);
  auto ss = singular_system(b, z);
  auto fast = shifted_singular_values(b, z);
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_NEAR(mu[7 + i], ss.values[i], 1e-12);
    EXPECT_NEAR(mu[6 - i], -ss.values[i], 1e-12);
    EXPECT_NEAR(fast[i], ss.values[i], 1e-12);
  }
}

TEST(SingularSystem, Examples) {
  for (double v : singular_system(ComplexMatrix::identity(4), 0.0).values) EXPECT_NEAR(v, 1.0, 1e-15);
  ComplexMatrix d{{1.0, 0.0}, {0.0, 2.0}};
  auto s = singular_system(d, 1.0);
  EXPECT_NEAR(s.values[0], 0.0, 1e-15);
  EXPECT_NEAR(s.values[1], 1.0, 1e-15);
}

TEST(ResolventTrace, ClosedForms) {
  const double eta = 0.37;
  auto g0 = resolvent_trace(ComplexMatrix(4, 4), 0.0, eta);
  EXPECT_NEAR(g0.real(), 0.0, 0.0);
  EXPECT_NEAR(g0.imag(), 1.0 / eta, 1e-14);
  auto u = haar_unitary(5, 9);
  auto g1 = resolvent_trace(u, 0.0, 1.0);
  EXPECT_NEAR(g1.imag(), 0.5, 1e-13);
  EXPECT_THROW(resolvent_trace(u, 0.0, 0.0), InvalidParameter);
}

TEST(ResolventTrace, MatchesDenseInverse) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto b = random_complex(4, 4, 30 + seed);
    const cplx z(0.2, -0.1);
    for (double eta : {1e-3, 0.05, 1.0}) {
      auto fast = resolvent_trace(b, z, eta);
      auto dense = resolvent_trace_dense(b, z, eta);
      EXPECT_NEAR(std::abs(fast - dense), 0.0, 1e-11 * std::abs(dense));
      EXPECT_LE(std::abs(dense.real()), 1e-12 * std::abs(dense));
      EXPECT_GT(fast.imag(), 0.0);
    }
  }
  EXPECT_THROW(resolvent_trace_dense(ComplexMatrix(65, 65), 0.0, 1.0), InvalidParameter);
}

TEST(ResolventTrace, CountBoundHolds) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = shifted_singular_values(random_complex(16, 16, seed), cplx(0.1, 0.1));
    for (double eta : {1e-3, 1e-2, 0.1, 0.5}) {
      auto cb = small_singular_value_count(s, eta);
      EXPECT_TRUE(cb.holds) << cb.count << " " << cb.bound;
    }
  }
}

TEST(Minor, Examples) {
  auto b = random_complex(4, 4, 3);
  EXPECT_TRUE(minor(b, {}) == b);
  auto m = minor(ComplexMatrix::identity(3), {0});
  EXPECT_TRUE((m == ComplexMatrix{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}));
  EXPECT_THROW(minor(b, {4}), IndexOutOfRange);
}

TEST(Minor, InterlacingOnRandomMatrices) {
  auto b = random_complex(8, 8, 44);
  std::vector<std::size_t> chain;
  for (std::size_t step = 0; step < 4; ++step) {
    auto outer = padded_values(minor(b, chain));
    auto next = chain;
    next.push_back((3 * step + 1) % 8);
    auto inner = padded_values(minor(b, next));
    for (std::size_t k = 0; k < 8; ++k) {
      EXPECT_LE(inner[k], outer[k] + 1e-12);
      if (k + 1 < 8) {
        EXPECT_LE(outer[k], inner[k + 1] + 1e-12);
      }
    }
    chain = next;
  }
}

TEST(SchurMinor, IdentityOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto b = random_complex(6, 6, 500 + seed);
    for (std::size_t j = 0; j < 3; ++j) {
      auto rep = schur_minor_report(b, j, 0.1 / 6.0);
      EXPECT_LE(rep.residual, 1e-9) << seed << " " << j;
      EXPECT_TRUE(rep.c_nonincreasing);
      EXPECT_TRUE(rep.c_lower_bound);
      EXPECT_LT(rep.rhs.imag(), 0.0);
      for (std::size_t i = 0; i <= j; ++i) EXPECT_EQ(rep.lambda[i], 0.0);
      for (double c : rep.c) EXPECT_GT(c, 0.0);
    }
  }
}

TEST(SchurMinor, RealInputGivesRealW) {
  auto b = to_complex(random_real(6, 6, 8));
  auto rep = schur_minor_report(b, 0, 0.02);
  EXPECT_LE(rep.residual, 1e-9);
  // Real singular vectors up to a global phase per vector: |w_i| is what
  // enters, and for a real B the phase-fixed w_i are real.
  auto basis = linalg::right_singular_basis(row_block(b, 1, 6));
  for (std::size_t i = 0; i < 6; ++i) {
    auto v = basis.right_v.column(i);
    std::size_t big = 0;
    for (std::size_t k = 1; k < 6; ++k)
      if (std::abs(v[k]) > std::abs(v[big])) big = k;
    const cplx ph = std::abs(v[big]) / v[big];
    cplx w = 0.0;
    for (std::size_t k = 0; k < 6; ++k) w += b(0, k) * v[k] * ph;
    EXPECT_LE(std::abs(w.imag()), 1e-12);
    EXPECT_NEAR(std::abs(w) * std::sqrt(6.0), std::abs(rep.w[i]), 1e-12);
  }
}

TEST(SchurMinor, GeneralIndexSetByPermutation) {
  auto b = random_complex(6, 6, 71);
  auto rep = schur_minor_report(b, {4, 1}, 3, 0.05);
  EXPECT_LE(rep.residual, 1e-9);
  // lhs is 1/G_jj of the hermitized minor with rows {1,4} removed; check it
  // against the top-left block formula G_11 = i eta [(M M^dagger + eta^2)^{-1}]_{11}.
  auto m = minor(b, {1, 4});
  auto mm = m * adjoint(m);
  for (std::size_t i = 0; i < mm.rows(); ++i) mm(i, i) += 0.05 * 0.05;
  auto inv = linalg::inverse(mm);
  // Row 3 sits at position 2 once rows 1 and 4 are removed.
  const cplx g = cplx(0.0, 0.05) * inv(2, 2);
  EXPECT_NEAR(std::abs(1.0 / g - rep.lhs), 0.0, 1e-9 * std::abs(rep.lhs));
  EXPECT_THROW(schur_minor_report(b, {1, 1}, 3, 0.05), InvalidParameter);
  EXPECT_THROW(schur_minor_report(b, 6, 0.05), IndexOutOfRange);
}

TEST(QSpectral, IdentityExample) {
  auto q = q_spectral_matrix(ComplexMatrix::identity(4), 1);
  EXPECT_EQ(q.q(0, 0), 1.0);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(q.q(1, j), 0.0);
  EXPECT_NEAR(q.m[0], 0.0, 1e-15);
  EXPECT_NEAR(q.m[1], 1.0, 1e-15);
}

TEST(QSpectral, DiagonalPhases) {
  // Each index contributes the 2x1 column (cos t, sin t); for k=1 the
  // singular values are 0 and 1 whatever the phase.
  std::vector<cplx> d;
  for (double t : {0.3, 1.1, 2.0, -0.7}) d.push_back(std::polar(1.0, t));
  auto u = ComplexMatrix::diagonal(d);
  for (std::size_t k = 1; k <= 2; ++k) {
    auto q = q_spectral_matrix(u, k);
    EXPECT_TRUE(q.top_bounded);
    EXPECT_TRUE(q.middle_bounded);
    EXPECT_NEAR(q.sum_sq, double(k), 1e-13);
    for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(q.m[i], 0.0, 1e-13);
    for (std::size_t i = k; i < 2 * k; ++i) EXPECT_NEAR(q.m[i], 1.0, 1e-13);
  }
}

TEST(QSpectral, HaarSweep) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto u = haar_unitary(8, 1000 + seed);
    for (std::size_t k = 1; k <= 3; ++k) {
      auto q = q_spectral_matrix(u, k);
      EXPECT_TRUE(q.top_bounded);
      EXPECT_TRUE(q.middle_bounded);
      EXPECT_NEAR(q.sum_sq, double(k), 1e-12);
    }
  }
  auto bad = random_complex(4, 4, 1);
  EXPECT_THROW(q_spectral_matrix(bad, 1), NonUnitary);
  EXPECT_THROW(q_spectral_matrix(ComplexMatrix::identity(4), 3), InvalidParameter);
}
