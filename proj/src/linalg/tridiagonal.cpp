#include "tridiagonal.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace girko::linalg::detail {

void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix* z) {
  const std::size_t n = d.size();
  if (n == 0) return;
  e.resize(n);
  e[n - 1] = 0.0;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double anorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
  // Absolute floor: small off-diagonals next to tiny diagonals (the zero
  // diagonal of a Golub-Kahan matrix) would otherwise never deflate.
  const double abs_floor = eps * anorm;

  const std::size_t zrows = z ? z->rows() : 0;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd || std::abs(e[m]) <= abs_floor) break;
      }
      if (m != l) {
        if (iter++ == kMaxSweepsPerEigenvalue)
          throw NumericalFailure("tridiagonal QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        std::size_t i = m;
        while (i-- > l) {
          double f = s * e[i];
          const double b = c * e[i];
          e[i + 1] = (r = std::hypot(f, g));
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          d[i + 1] = g + (p = s * r);
          g = c * r - b;
          if (z) {
            for (std::size_t k = 0; k < zrows; ++k) {
              cplx* zk = z->row(k).data();
              const cplx zf = zk[i + 1];
              zk[i + 1] = s * zk[i] + c * zf;
              zk[i] = c * zk[i] - s * zf;
            }
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  for (double v : d)
    if (!std::isfinite(v)) throw NumericalFailure("non-finite eigenvalue in tridiagonal QL");
}

void sort_ascending(std::vector<double>& values, ComplexMatrix* z) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> sorted(values.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = values[order[k]];
  values.swap(sorted);
  if (z) {
    ComplexMatrix out(z->rows(), z->cols());
    for (std::size_t k = 0; k < order.size(); ++k)
      for (std::size_t i = 0; i < z->rows(); ++i) out(i, k) = (*z)(i, order[k]);
    *z = std::move(out);
  }
}

}  // namespace girko::linalg::detail
