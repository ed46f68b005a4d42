#include <algorithm>
#include <cmath>
#include <limits>

#include "girko/linalg/decompositions.hpp"
#include "householder.hpp"
#include "tridiagonal.hpp"

namespace girko::linalg {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Schur {
  ComplexMatrix t;
  ComplexMatrix z;  // empty unless vectors were requested
};

Schur schur(const ComplexMatrix& b, bool want_vectors) {
  if (!b.is_square()) throw InvalidInput("complex_eig: matrix is not square");
  if (!all_finite(b)) throw InvalidInput("complex_eig: non-finite entries");
  const std::size_t n = b.rows();
  Schur s{b, want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix{}};
  ComplexMatrix& h = s.t;

  for (std::size_t k = 0; k + 2 < n; ++k) {
    std::vector<cplx> x(n - k - 1);
    for (std::size_t i = k + 1; i < n; ++i) x[i - k - 1] = h(i, k);
    auto hr = detail::make_reflector(std::move(x));
    if (hr.beta == 0.0) continue;
    detail::apply_left(h, hr, k + 1, k, n);
    detail::apply_right(h, hr, 0, n, k + 1);
    h(k + 1, k) = hr.alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    if (want_vectors) detail::apply_right(s.z, hr, 0, n, k + 1);
  }
  if (n < 2) return s;

  const double hnorm = std::max(frobenius_norm(h), std::numeric_limits<double>::min());
  std::size_t hi = n - 1;
  int iter = 0;
  while (hi > 0) {
    std::size_t l = hi;
    while (l > 0) {
      double scale = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (scale == 0.0) scale = hnorm;
      if (std::abs(h(l, l - 1)) <= kEps * scale) {
        h(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    if (l == hi) {
      --hi;
      iter = 0;
      continue;
    }
    if (++iter > detail::kMaxSweepsPerEigenvalue)
      throw NumericalFailure("complex_eig: QR iteration did not converge");

    cplx mu;
    if (iter % 10 == 0) {
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      const cplx a = h(hi - 1, hi - 1), bb = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
      const cplx half = 0.5 * (a - d);
      const cplx disc = std::sqrt(half * half + bb * c);
      const cplx m1 = 0.5 * (a + d) + disc, m2 = 0.5 * (a + d) - disc;
      mu = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
    }

    const std::size_t col_end = want_vectors ? n : hi + 1;
    const std::size_t row_begin = want_vectors ? 0 : l;
    cplx x = h(l, l) - mu;
    cplx y = h(l + 1, l);
    for (std::size_t k = l; k < hi; ++k) {
      const double ax = std::abs(x);
      const double nrm = std::hypot(ax, std::abs(y));
      double c;
      cplx sn;
      if (nrm == 0.0) {
        c = 1.0;
        sn = 0.0;
      } else if (ax == 0.0) {
        c = 0.0;
        sn = std::conj(y) / std::abs(y);
      } else {
        c = ax / nrm;
        sn = (x / ax) * std::conj(y) / nrm;
      }
      const std::size_t c0 = k > l ? k - 1 : l;
      for (std::size_t j = c0; j < col_end; ++j) {
        const cplx hk = h(k, j), hk1 = h(k + 1, j);
        h(k, j) = c * hk + sn * hk1;
        h(k + 1, j) = -std::conj(sn) * hk + c * hk1;
      }
      if (k > l) h(k + 1, k - 1) = 0.0;
      const std::size_t r1 = std::min(k + 2, hi);
      for (std::size_t i = row_begin; i <= r1; ++i) {
        const cplx hk = h(i, k), hk1 = h(i, k + 1);
        h(i, k) = c * hk + std::conj(sn) * hk1;
        h(i, k + 1) = -sn * hk + c * hk1;
      }
      if (want_vectors) {
        for (std::size_t i = 0; i < n; ++i) {
          cplx* zi = s.z.row(i).data();
          const cplx zk = zi[k], zk1 = zi[k + 1];
          zi[k] = c * zk + std::conj(sn) * zk1;
          zi[k + 1] = -sn * zk + c * zk1;
        }
      }
      if (k + 1 < hi) {
        x = h(k + 1, k);
        y = h(k + 2, k);
      }
    }
  }
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) h(i, j) = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(h(i, i).real()) || !std::isfinite(h(i, i).imag()))
      throw NumericalFailure("complex_eig: non-finite eigenvalue");
  return s;
}

}  // namespace

ComplexVector eigenvalues(const ComplexMatrix& b) {
  const auto s = schur(b, false);
  ComplexVector out(b.rows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.t(i, i);
  return out;
}

SpectralDecomposition complex_eig(const ComplexMatrix& b, double tol) {
  (void)tol;
  const std::size_t n = b.rows();
  const auto s = schur(b, true);
  const ComplexMatrix& t = s.t;

  SpectralDecomposition out;
  out.sigma.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.sigma[i] = t(i, i);

  const double bnorm = frobenius_norm(b);
  const double gap_thr = 1e-9 * bnorm;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(out.sigma[i] - out.sigma[j]) <= gap_thr)
        throw DegenerateSpectrum("complex_eig: eigenvalue gap below 1e-9 * ||B||");

  const double floor = std::max(kEps * frobenius_norm(t), std::numeric_limits<double>::min());
  auto safe = [&](cplx d) {
    return std::abs(d) < floor ? cplx(floor, 0.0) : d;
  };

  out.right = ComplexMatrix(n, n);
  out.left = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx lam = t(k, k);
    ComplexVector x(n, 0.0), y(n, 0.0);
    x[k] = 1.0;
    for (std::size_t i = k; i-- > 0;) {
      cplx acc = 0.0;
      for (std::size_t j = i + 1; j <= k; ++j) acc += t(i, j) * x[j];
      x[i] = -acc / safe(t(i, i) - lam);
    }
    y[k] = 1.0;
    for (std::size_t j = k + 1; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t i = k; i < j; ++i) acc += std::conj(t(i, j)) * y[i];
      y[j] = -acc / safe(std::conj(t(j, j)) - std::conj(lam));
    }
    ComplexVector r = s.z * x;
    ComplexVector lv = s.z * y;

    const double rn = norm2(r);
    std::size_t big = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(r[i]) > std::abs(r[big])) big = i;
    const cplx ph = std::conj(r[big]) / std::abs(r[big]);
    for (auto& v : r) v *= ph / rn;
    r[big] = std::abs(r[big]);

    const cplx a = vdot(lv, r);
    if (std::abs(a) == 0.0) throw NumericalFailure("complex_eig: left/right eigenvectors orthogonal");
    for (auto& v : lv) v /= std::conj(a);
    out.right.set_column(k, r);
    out.left.set_column(k, lv);
  }

  ComplexMatrix recon(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += out.right(i, k) * out.sigma[k] * std::conj(out.left(j, k));
      recon(i, j) = acc;
    }
  out.residual = bnorm > 0.0 ? frobenius_norm(recon - b) / bnorm : frobenius_norm(recon);
  return out;
}

}  // namespace girko::linalg
