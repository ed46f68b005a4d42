#include <cmath>

#include "girko/linalg/decompositions.hpp"
#include "householder.hpp"
#include "tridiagonal.hpp"

namespace girko::linalg {
namespace {

void check_hermitian(const ComplexMatrix& h, double tol) {
  if (!h.is_square()) throw InvalidInput("hermitian_eig: matrix is not square");
  if (!all_finite(h)) throw InvalidInput("hermitian_eig: non-finite entries");
  const double scale = std::max(frobenius_norm(h), 1e-300);
  double defect = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = i; j < h.cols(); ++j)
      defect = std::max(defect, std::abs(h(i, j) - std::conj(h(j, i))));
  if (defect > std::max(tol, 1e-14) * scale)
    throw InvalidInput("hermitian_eig: matrix is not Hermitian");
}

// Householder reduction to real symmetric tridiagonal form. When `z` is
// non-null it receives the unitary Q D with H = (Q D) T (Q D)^dagger.
void tridiagonalize(ComplexMatrix a, RealVector& diag, RealVector& off, ComplexMatrix* z) {
  const std::size_t n = a.rows();
  if (z) *z = ComplexMatrix::identity(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    std::vector<cplx> x(n - k - 1);
    for (std::size_t i = k + 1; i < n; ++i) x[i - k - 1] = a(i, k);
    auto h = detail::make_reflector(std::move(x));
    if (h.beta == 0.0) continue;
    detail::apply_left(a, h, k + 1, k, n);
    detail::apply_right(a, h, k, n, k + 1);
    a(k + 1, k) = h.alpha;
    a(k, k + 1) = std::conj(h.alpha);
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = a(k, i) = 0.0;
    if (z) detail::apply_right(*z, h, 0, n, k + 1);
  }
  diag.assign(n, 0.0);
  off.assign(n, 0.0);
  cplx delta = 1.0;
  std::vector<cplx> phases(n, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    diag[k] = a(k, k).real();
    if (k + 1 < n) {
      const cplx t = a(k + 1, k);
      const double mag = std::abs(t);
      off[k] = mag;
      if (mag > 0.0) delta *= t / mag;
      phases[k + 1] = delta;
    }
  }
  if (z) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx* zi = z->row(i).data();
      for (std::size_t j = 0; j < n; ++j) zi[j] *= phases[j];
    }
  }
}

}  // namespace

EigenSystem hermitian_eig(const ComplexMatrix& h, double tol) {
  check_hermitian(h, tol);
  EigenSystem es;
  RealVector off;
  tridiagonalize(h, es.values, off, &es.vectors);
  detail::tridiagonal_ql(es.values, off, &es.vectors);
  detail::sort_ascending(es.values, &es.vectors);

  const std::size_t n = h.rows();
  const double scale = std::max(frobenius_norm(h), 1e-300);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = es.vectors.column(i);
    auto hv = h * v;
    double r = 0.0;
    for (std::size_t k = 0; k < n; ++k) r += std::norm(hv[k] - es.values[i] * v[k]);
    worst = std::max(worst, std::sqrt(r));
  }
  es.residual = worst / scale;
  return es;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& h, double tol) {
  check_hermitian(h, tol);
  RealVector values, off;
  tridiagonalize(h, values, off, nullptr);
  detail::tridiagonal_ql(values, off, nullptr);
  detail::sort_ascending(values, nullptr);
  return values;
}

}  // namespace girko::linalg
