#pragma once

// Matrix Dyson equation for the hermitization of A - z with an i.i.d. noise
// of unit variance. The solution is M = (H_0 - w - m)^{-1} with the scalar
// m = <M>, so every query reduces to the singular values s_i of A - z:
//   m = (1/N) sum_i zeta / (s_i^2 - zeta^2),   zeta = w + m.

#include <cstddef>
#include <vector>

#include "girko/linalg/decompositions.hpp"

namespace girko::mde {

inline constexpr double kDefaultEta0 = 1e-6;

struct MdeOptions {
  double tol = 1e-12;
  int max_iterations = 10000;
  double damping = 0.5;
};

struct MdeSolution {
  cplx w;
  cplx m;
  double residual = 0.0;  // |m - F(m)|
  int iterations = 0;
  double scdos = 0.0;     // Im m / pi
};

/// Right-hand side F(m) of the scalar fixed point.
cplx mde_map(const RealVector& s, cplx w, cplx m);

MdeSolution solve_mde(const RealVector& s, cplx w, const MdeOptions& opt = {});
MdeSolution solve_mde(const ComplexMatrix& a, cplx z, cplx w, const MdeOptions& opt = {});

/// Full 2N x 2N M = (H_0 - (w + m))^{-1}; dense, for checks.
ComplexMatrix mde_matrix(const ComplexMatrix& a, cplx z, const MdeSolution& sol);

/// pi^{-1} Im m(x + i eta0), with one Richardson step against eta0/2 when
/// the two evaluations differ by more than 1e-4.
double scdos(const RealVector& s, double x, double eta0 = kDefaultEta0);
double scdos(const ComplexMatrix& a, cplx z, double x, double eta0 = kDefaultEta0);

struct BulkQuery {
  double tau = 0.0;
  double value = 0.0;  // (1/N) Tr((A-z)(A-z)^dagger + tau^2)^{-1}
  bool in_bulk = false;
};

BulkQuery in_bulk(const RealVector& s, double tau);
BulkQuery in_bulk(const ComplexMatrix& a, cplx z, double tau);

/// Cumulative scDOS on [0, x_max] for quantile queries.
class CumulativeDos {
 public:
  CumulativeDos(RealVector s, double eta0 = kDefaultEta0, std::size_t panels = 400);
  double density(double x) const;
  /// Integral of the density over [0, x].
  double cumulative(double x) const;
  /// Total mass on [0, x_max]; close to 1/2 by symmetry.
  double half_mass() const { return table_.back(); }
  double upper() const { return x_max_; }
  /// Smallest x with cumulative(x) = p; throws QuantileOutOfSupport if p
  /// is not below half_mass().
  double quantile(double p) const;

 private:
  double panel_integral(double a, double b) const;
  RealVector s_;
  double eta0_;
  double x_max_;
  double h_;
  RealVector table_;  // cumulative mass at panel boundaries
};

struct OverlapProfile {
  RealVector gamma;      // gamma_i, i = 1..count, with mass i/(2N) on [0, gamma_i]
  ComplexVector q;       // <Im[M(gamma_i)] F> / <Im M(gamma_i)>
  RealVector index_over_n;
};

OverlapProfile overlap_profile(const ComplexMatrix& a, cplx z, std::size_t count,
                               double eta0 = kDefaultEta0);

/// q at one spectral point from the SVD of A - z.
cplx overlap_q(const linalg::SingularSystem& svd, cplx w, const MdeSolution& sol);

}  // namespace girko::mde
