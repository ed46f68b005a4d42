#include <cmath>
#include <utility>

#include "girko/linalg/decompositions.hpp"

namespace girko::linalg {

ComplexMatrix linear_solve(const ComplexMatrix& m, const ComplexMatrix& rhs, double tol) {
  if (!m.is_square()) throw DimensionMismatch("linear_solve: matrix is not square");
  if (rhs.rows() != m.rows()) throw DimensionMismatch("linear_solve: rhs row count mismatch");
  const std::size_t n = m.rows(), nr = rhs.cols();
  ComplexMatrix a = m;
  ComplexMatrix x = rhs;
  const double scale = max_abs(m);
  const double pivot_floor = tol * scale;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (std::abs(a(p, k)) <= pivot_floor || a(p, k) == cplx(0.0))
      throw SingularSystemError("linear_solve: pivot below tolerance");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      for (std::size_t j = 0; j < nr; ++j) std::swap(x(k, j), x(p, j));
    }
    const cplx piv = a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / piv;
      if (f == cplx(0.0)) continue;
      a(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < nr; ++j) x(i, j) -= f * x(k, j);
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t j = 0; j < nr; ++j) {
      cplx acc = x(k, j);
      for (std::size_t i = k + 1; i < n; ++i) acc -= a(k, i) * x(i, j);
      x(k, j) = acc / a(k, k);
    }
  }
  return x;
}

ComplexMatrix inverse(const ComplexMatrix& m, double tol) {
  return linear_solve(m, ComplexMatrix::identity(m.rows()), tol);
}

ComplexVector kernel_vector(const ComplexMatrix& m, double tol) {
  if (m.rows() + 1 != m.cols())
    throw DimensionMismatch("kernel_vector: expected an (N-1) x N matrix");
  const auto basis = right_singular_basis(m);
  // values[0] is the padded kernel direction, values[1] the smallest genuine one.
  if (basis.values.size() > 1 && basis.values[1] < tol)
    throw RankDeficient("kernel_vector: kernel is not one-dimensional");
  return basis.right_v.column(0);
}

RealMatrix realify(const ComplexMatrix& m) {
  const std::size_t r = m.rows(), c = m.cols();
  RealMatrix out(2 * r, 2 * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double re = m(i, j).real(), im = m(i, j).imag();
      out(i, j) = re;
      out(i, c + j) = -im;
      out(r + i, j) = im;
      out(r + i, c + j) = re;
    }
  return out;
}

RealVector realify(const ComplexVector& v) {
  RealVector out(2 * v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i].real();
    out[v.size() + i] = v[i].imag();
  }
  return out;
}

}  // namespace girko::linalg
