#pragma once

// Dense eigen- and singular-value kernels. Everything here is a pure function
// of its arguments; calls are single-threaded and may run concurrently.

#include <cstddef>
#include <vector>

#include "girko/linalg/matrix.hpp"

namespace girko::linalg {

inline constexpr double kDefaultTol = 1e-12;

/// Spectrum of a Hermitian matrix: ascending values, orthonormal columns.
struct EigenSystem {
  RealVector values;
  ComplexMatrix vectors;  // column i pairs with values[i]
  double residual = 0.0;  // max_i ||H v_i - mu_i v_i|| / ||H||_F
};

/// Bi-orthogonal eigendecomposition B = sum_i sigma_i r_i l_i^dagger.
///
/// Columns of `right` have unit norm with the largest-magnitude entry real
/// positive; columns of `left` are scaled so that l_i^dagger r_i = 1.
struct SpectralDecomposition {
  ComplexVector sigma;
  ComplexMatrix right;
  ComplexMatrix left;
  double residual = 0.0;  // ||B - R diag(sigma) L^dagger||_F / ||B||_F
};

/// Thin singular value decomposition with ascending values.
///
/// For an m x n input there are min(m, n) triples and B v_i = lambda_i u_i.
struct SingularSystem {
  RealVector values;
  ComplexMatrix left_u;   // m x k
  ComplexMatrix right_v;  // n x k
};

/// Right singular basis of an m x n matrix with m <= n, padded with the
/// n - m kernel directions: values has length n (zeros first, ascending)
/// and right_v is n x n unitary.
struct RightSingularBasis {
  RealVector values;
  ComplexMatrix right_v;
};

EigenSystem hermitian_eig(const ComplexMatrix& h, double tol = kDefaultTol);
RealVector hermitian_eigenvalues(const ComplexMatrix& h, double tol = kDefaultTol);

SingularSystem svd(const ComplexMatrix& b, double tol = kDefaultTol);
RightSingularBasis right_singular_basis(const ComplexMatrix& b, double tol = kDefaultTol);

/// Singular values only, ascending. Runs a Householder bidiagonalization,
/// which is the tridiagonal reduction of the hermitization up to a perfect
/// shuffle, followed by the same implicit QL iteration as hermitian_eig.
RealVector singular_values(const RealMatrix& b);
RealVector singular_values(const ComplexMatrix& b);

/// Largest singular value.
double operator_norm(const ComplexMatrix& b);
double operator_norm(const RealMatrix& b);

/// Eigenvalues of a general square matrix (Schur diagonal). No simplicity check.
ComplexVector eigenvalues(const ComplexMatrix& b);

/// Full bi-orthogonal decomposition. Throws DegenerateSpectrum when the
/// minimal eigenvalue gap is below 1e-9 * ||B||_F.
SpectralDecomposition complex_eig(const ComplexMatrix& b, double tol = kDefaultTol);

/// Unit vector spanning the one-dimensional kernel of an (N-1) x N matrix.
ComplexVector kernel_vector(const ComplexMatrix& m, double tol = 1e-10);

/// [[Re M, -Im M], [Im M, Re M]].
RealMatrix realify(const ComplexMatrix& m);
/// (Re v; Im v).
RealVector realify(const ComplexVector& v);

/// Solves M X = rhs by LU with partial pivoting.
ComplexMatrix linear_solve(const ComplexMatrix& m, const ComplexMatrix& rhs, double tol = 1e-14);
ComplexMatrix inverse(const ComplexMatrix& m, double tol = 1e-14);

}  // namespace girko::linalg
