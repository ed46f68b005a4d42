#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "girko/linalg/decompositions.hpp"
#include "householder.hpp"
#include "tridiagonal.hpp"

namespace girko::linalg {
namespace {

template <typename T>
RealVector bidiagonal_singular_values(Matrix<T> a) {
  if (a.rows() < a.cols()) a = adjoint(a);
  const std::size_t m = a.rows(), n = a.cols();
  if (n == 0) return {};
  if (!all_finite(a)) throw InvalidInput("singular_values: non-finite entries");
  RealVector d(n, 0.0), f(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<T> x(m - k);
    for (std::size_t i = k; i < m; ++i) x[i - k] = a(i, k);
    auto hl = detail::make_reflector(std::move(x));
    detail::apply_left(a, hl, k, k, n);
    d[k] = hl.beta == 0.0 ? std::abs(a(k, k)) : std::abs(hl.alpha);
    if (k + 1 < n) {
      std::vector<T> y(n - k - 1);
      for (std::size_t j = k + 1; j < n; ++j) y[j - k - 1] = conj_of(a(k, j));
      auto hr = detail::make_reflector(std::move(y));
      detail::apply_right(a, hr, k, m, k + 1);
      f[k] = hr.beta == 0.0 ? std::abs(a(k, k + 1)) : std::abs(hr.alpha);
    }
  }
  // Golub-Kahan form: zero diagonal, off-diagonals d0, f0, d1, f1, ...
  RealVector diag(2 * n, 0.0), off(2 * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    off[2 * k] = d[k];
    if (k + 1 < n) off[2 * k + 1] = f[k];
  }
  detail::tridiagonal_ql(diag, off, nullptr);
  std::sort(diag.begin(), diag.end());
  RealVector values(diag.begin() + static_cast<std::ptrdiff_t>(n), diag.end());
  for (auto& v : values) v = std::abs(v);
  std::sort(values.begin(), values.end());
  return values;
}

ComplexMatrix hermitization_of(const ComplexMatrix& b) {
  const std::size_t m = b.rows(), n = b.cols();
  ComplexMatrix h(m + n, m + n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      h(i, m + j) = b(i, j);
      h(m + j, i) = std::conj(b(i, j));
    }
  return h;
}

// Pivoted modified Gram-Schmidt: extends `basis` (orthonormal columns stored
// as vectors) by `count` directions picked from `pool`.
void extend_basis(std::vector<ComplexVector>& basis, std::vector<ComplexVector> pool,
                  std::size_t count) {
  auto project_out = [&](ComplexVector& x) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        const cplx c = vdot(q, x);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * q[i];
      }
  };
  for (std::size_t added = 0; added < count; ++added) {
    double best = -1.0;
    std::size_t pick = 0;
    for (std::size_t p = 0; p < pool.size(); ++p) {
      project_out(pool[p]);
      const double nrm = norm2(pool[p]);
      if (nrm > best) {
        best = nrm;
        pick = p;
      }
    }
    if (pool.empty() || best < 1e-3)
      throw NumericalFailure("svd: could not complete singular vector basis");
    ComplexVector q = pool[pick];
    project_out(q);
    const double nrm = norm2(q);
    for (auto& x : q) x /= nrm;
    basis.push_back(std::move(q));
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
}

}  // namespace

RealVector singular_values(const RealMatrix& b) { return bidiagonal_singular_values(b); }
RealVector singular_values(const ComplexMatrix& b) { return bidiagonal_singular_values(b); }

double operator_norm(const ComplexMatrix& b) {
  const auto s = singular_values(b);
  return s.empty() ? 0.0 : s.back();
}

double operator_norm(const RealMatrix& b) {
  const auto s = singular_values(b);
  return s.empty() ? 0.0 : s.back();
}

SingularSystem svd(const ComplexMatrix& b, double tol) {
  if (!all_finite(b)) throw InvalidInput("svd: non-finite entries");
  const std::size_t m = b.rows(), n = b.cols(), k = std::min(m, n);
  SingularSystem out;
  out.left_u = ComplexMatrix(m, k);
  out.right_v = ComplexMatrix(n, k);
  if (k == 0) return out;

  const auto es = hermitian_eig(hermitization_of(b), tol);
  const std::size_t dim = m + n;
  const double scale = std::max(std::abs(es.values.front()), std::abs(es.values.back()));
  const double thr = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300) *
                     std::sqrt(static_cast<double>(dim));

  std::vector<ComplexVector> us, vs;
  RealVector vals;
  std::vector<ComplexVector> top_pool, bottom_pool;
  auto split = [&](std::size_t col, ComplexVector& top, ComplexVector& bottom) {
    top.assign(m, 0.0);
    bottom.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) top[i] = es.vectors(i, col);
    for (std::size_t i = 0; i < n; ++i) bottom[i] = es.vectors(m + i, col);
  };

  // Positive branch, largest first.
  for (std::size_t p = 0; p < k; ++p) {
    const std::size_t col = dim - 1 - p;
    const double mu = es.values[col];
    if (mu <= thr) break;
    ComplexVector top, bottom;
    split(col, top, bottom);
    const double nt = norm2(top), nb = norm2(bottom);
    if (nt * nt < 0.25 || nb * nb < 0.25) {
      // The +mu / -mu pair mixed; recover both directions from the pool.
      ComplexVector t2, b2;
      split(p, t2, b2);
      top_pool.push_back(top);
      bottom_pool.push_back(bottom);
      top_pool.push_back(t2);
      bottom_pool.push_back(b2);
      continue;
    }
    for (auto& x : top) x /= nt;
    for (auto& x : bottom) x /= nb;
    us.push_back(std::move(top));
    vs.push_back(std::move(bottom));
    vals.push_back(mu);
  }
  for (std::size_t col = 0; col < dim; ++col) {
    if (std::abs(es.values[col]) > thr) continue;
    ComplexVector top, bottom;
    split(col, top, bottom);
    top_pool.push_back(std::move(top));
    bottom_pool.push_back(std::move(bottom));
  }
  const std::size_t missing = k - vals.size();
  if (missing > 0) {
    const std::size_t have = vals.size();
    extend_basis(us, top_pool, missing);
    extend_basis(vs, bottom_pool, missing);
    for (std::size_t i = have; i < k; ++i) {
      auto bv = b * vs[i];
      // Align the phase of u with B v where that direction is resolvable.
      const cplx c = vdot(us[i], bv);
      if (std::abs(c) > 0.0) {
        const cplx ph = c / std::abs(c);
        for (auto& x : us[i]) x *= ph;
      }
      vals.push_back(norm2(bv));
    }
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return vals[x] < vals[y]; });
  out.values.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t src = order[c];
    out.values[c] = vals[src];
    out.left_u.set_column(c, us[src]);
    out.right_v.set_column(c, vs[src]);
  }
  return out;
}

RightSingularBasis right_singular_basis(const ComplexMatrix& b, double tol) {
  const std::size_t m = b.rows(), n = b.cols();
  if (m > n) throw DimensionMismatch("right_singular_basis: needs rows <= cols");
  const auto s = svd(b, tol);
  std::vector<ComplexVector> basis;
  for (std::size_t c = 0; c < m; ++c) basis.push_back(s.right_v.column(c));
  std::vector<ComplexVector> pool;
  for (std::size_t j = 0; j < n; ++j) {
    ComplexVector e(n, 0.0);
    e[j] = 1.0;
    pool.push_back(std::move(e));
  }
  extend_basis(basis, std::move(pool), n - m);

  RightSingularBasis out;
  out.values.assign(n - m, 0.0);
  out.values.insert(out.values.end(), s.values.begin(), s.values.end());
  out.right_v = ComplexMatrix(n, n);
  for (std::size_t c = 0; c < n - m; ++c) out.right_v.set_column(c, basis[m + c]);
  for (std::size_t c = 0; c < m; ++c) out.right_v.set_column(n - m + c, basis[c]);
  return out;
}

}  // namespace girko::linalg
