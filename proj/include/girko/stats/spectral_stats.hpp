#pragma once

// Per-matrix spectral statistics: eigenvector overlaps, contour projectors,
// the Girko log-determinant identity and the Weyl / interlacing checks.

#include <cstddef>
#include <vector>

#include "girko/linalg/decompositions.hpp"

namespace girko::stats {

/// O_ij = (l_i^dagger l_j)(r_j^dagger r_i); sqrt(O_ii) is the condition
/// number of sigma_i.
struct OverlapMatrix {
  ComplexMatrix o;
  double diagonal(std::size_t i) const { return o(i, i).real(); }
};

OverlapMatrix overlaps(const linalg::SpectralDecomposition& d);

/// Trapezoidal rule for (1/2 pi i) \oint (w - B)^{-1} dw over |w - z0| = r.
/// npts = 0 picks max(64, 16 ceil(||B|| / r), n_gap) where n_gap resolves
/// the closest eigenvalue to the circle to 1e-12.
ComplexMatrix contour_projector(const ComplexMatrix& b, cplx z0, double r, std::size_t npts = 0);

/// Node count chosen by contour_projector when npts = 0.
std::size_t contour_nodes(const ComplexMatrix& b, cplx z0, double r);

/// |sigma_i - z| / lambda_1(B - z) at z = sigma_i + radius * {1, i, -1, -i},
/// averaged over the four directions, one entry per radius.
RealVector variational_condition(const ComplexMatrix& b, std::size_t i, const RealVector& radii);

/// Bump f(z) = f_0((z - z0) / r) with f_0(u) = exp(1 - 1/(1 - |u|^2)) on |u| < 1.
struct Bump {
  cplx z0;
  double r = 1.0;
  double value(cplx z) const;
  double laplacian(cplx z) const;
};

struct GirkoReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;  // abs_err / |lhs|, or abs_err when lhs = 0
  std::size_t grid_n = 0;
  double spacing = 0.0;
};

/// lhs = sum_i f(sigma_i); rhs = (1/2 pi) sum_g Delta f(z_g) L(z_g) dA on a
/// grid_n x grid_n midpoint grid over the bump's bounding square, with
/// L = sum_i log lambda_i(B - z). The eta integral of the hermitized
/// resolvent is done in closed form, which leaves this log-determinant.
GirkoReport girko_residual(const ComplexMatrix& b, const Bump& bump, std::size_t grid_n);

struct WeylReport {
  bool holds = false;
  RealVector log_margins;  // per k: log prod |sigma_i - z| - log prod lambda_i
  double min_margin = 0.0;
};

/// Products over the k closest eigenvalues dominate products of the k
/// smallest singular values of B - z, for every k.
WeylReport weyl_report(const ComplexMatrix& b, cplx z, double tol = 1e-9);

struct InterlacingReport {
  bool holds = false;
  RealVector outer;  // padded singular values of the minor without rows I
  RealVector inner;  // ... without rows I and i
  double min_margin = 0.0;
};

InterlacingReport interlacing_report(const ComplexMatrix& b, const std::vector<std::size_t>& removed,
                                     std::size_t i, double tol = 1e-12);

/// min over theta of ||Re[e^{i theta} v]||, the smallest singular value of
/// the N x 2 matrix [Re v | Im v].
struct PhaseFloor {
  double floor = 0.0;
  double theta_star = 0.0;
};

PhaseFloor phase_floor(const ComplexVector& v);

/// Brute-force minimum of ||Re[e^{i theta} v]|| over `angles` equispaced theta.
double phase_floor_scan(const ComplexVector& v, std::size_t angles);

struct RealShiftReport {
  double lhs = 0.0;  // phase_floor(v)^2
  double rhs = 0.0;  // lambda_1(B)^2 ||J Y w||^2 / (5 (||J Y|| + ||B||)^4)
  double lambda1 = 0.0;
  bool holds = false;
};

/// v spans ker J(Y + iB), w spans ker J B, where J drops the first row.
RealShiftReport real_shift_bound_check(const RealMatrix& y, const RealMatrix& b_im);

}  // namespace girko::stats
