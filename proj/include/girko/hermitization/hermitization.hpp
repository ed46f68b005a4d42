#pragma once

// Hermitization H_z = [[0, B - z], [(B - z)^dagger, 0]] and the identities
// built on it. Row indices are 0-based throughout.

#include <cstddef>
#include <vector>

#include "girko/linalg/decompositions.hpp"

namespace girko::hermitization {

struct Hermitization {
  ComplexMatrix base;
  cplx z;
  ComplexMatrix h;  // 2N x 2N
};

Hermitization hermitize(const ComplexMatrix& b, cplx z);

/// SVD of B - z with both vector families.
linalg::SingularSystem singular_system(const ComplexMatrix& b, cplx z);

/// Singular values of B - z only (ascending).
RealVector shifted_singular_values(const ComplexMatrix& b, cplx z);

/// <G_z(i eta)> = (1/2N) Tr (H_z - i eta)^{-1} = (i/N) sum_i eta / (lambda_i^2 + eta^2).
cplx resolvent_trace(const ComplexMatrix& b, cplx z, double eta);
cplx resolvent_trace_from_values(const RealVector& lambda, double eta);

/// Same quantity by inverting H_z - i eta densely; N <= 64 only.
cplx resolvent_trace_dense(const ComplexMatrix& b, cplx z, double eta);

/// |{i : lambda_i <= eta}| <= 2 N eta <Im G(i eta)>, from eta/(lambda^2+eta^2) >= 1/(2 eta).
struct CountBound {
  std::size_t count = 0;
  double bound = 0.0;
  bool holds = false;
};
CountBound small_singular_value_count(const RealVector& lambda, double eta);

/// Removes the listed rows of B.
ComplexMatrix minor(const ComplexMatrix& b, const std::vector<std::size_t>& removed);

/// Both sides of the row-j Schur complement identity for the minor chain
/// I = {0, ..., j-1}: lhs = 1 / G^{(I)}_{jj}(i eta) by direct inversion,
/// rhs = -i eta - i sum_i c_i |w_i|^2 from the singular system of the
/// minor with rows {0, ..., j} removed.
struct SchurMinorReport {
  std::size_t j = 0;
  double eta = 0.0;
  RealVector lambda;  // singular values of the next minor, j+1 zeros first
  RealVector c;
  ComplexVector w;
  cplx lhs;
  cplx rhs;
  double residual = 0.0;  // |lhs - rhs| / |lhs|
  bool c_nonincreasing = false;
  /// On lambda_k <= eta: 1/(2 N eta) <= c_i for all i <= k. Holds vacuously
  /// when lambda_1 > eta.
  bool c_lower_bound = false;
};
SchurMinorReport schur_minor_report(const ComplexMatrix& b, std::size_t j, double eta);

/// General index set: rows `removed` are permuted to the front, row `row`
/// next, and the chain report is taken at position |removed|.
SchurMinorReport schur_minor_report(const ComplexMatrix& b, const std::vector<std::size_t>& removed,
                                    std::size_t row, double eta);

/// Q = J[P_k] J[U] [I_N; O] = [P_k Re U; P_k Im U] and its singular values.
struct QSpectral {
  RealMatrix q;     // 2k x N
  RealVector m;     // ascending, length 2k
  double sum_sq = 0.0;
  bool top_bounded = false;     // m_{2k} <= 1 + tol
  bool middle_bounded = false;  // m_{k+1} >= 1/sqrt(k+1) - tol
};
QSpectral q_spectral_matrix(const ComplexMatrix& u, std::size_t k, double tol = 1e-10);

}  // namespace girko::hermitization
