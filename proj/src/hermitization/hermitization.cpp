#include "girko/hermitization/hermitization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace girko::hermitization {
namespace {

ComplexMatrix hermitize_rect(const ComplexMatrix& c) {
  const std::size_t m = c.rows(), n = c.cols();
  ComplexMatrix h(m + n, m + n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      h(i, m + j) = c(i, j);
      h(m + j, i) = std::conj(c(i, j));
    }
  return h;
}

void require_square(const ComplexMatrix& b, const char* who) {
  if (!b.is_square()) throw DimensionMismatch(std::string(who) + ": matrix is not square");
}

void require_eta(double eta, const char* who) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw InvalidParameter(std::string(who) + ": eta must be positive");
}

}  // namespace

Hermitization hermitize(const ComplexMatrix& b, cplx z) {
  require_square(b, "hermitize");
  return {b, z, hermitize_rect(shifted(b, z))};
}

linalg::SingularSystem singular_system(const ComplexMatrix& b, cplx z) {
  require_square(b, "singular_system");
  return linalg::svd(shifted(b, z));
}

RealVector shifted_singular_values(const ComplexMatrix& b, cplx z) {
  require_square(b, "shifted_singular_values");
  return linalg::singular_values(shifted(b, z));
}

cplx resolvent_trace_from_values(const RealVector& lambda, double eta) {
  require_eta(eta, "resolvent_trace");
  double acc = 0.0;
  for (double l : lambda) acc += eta / (l * l + eta * eta);
  return {0.0, acc / static_cast<double>(lambda.size())};
}

cplx resolvent_trace(const ComplexMatrix& b, cplx z, double eta) {
  require_eta(eta, "resolvent_trace");
  return resolvent_trace_from_values(shifted_singular_values(b, z), eta);
}

cplx resolvent_trace_dense(const ComplexMatrix& b, cplx z, double eta) {
  require_eta(eta, "resolvent_trace_dense");
  require_square(b, "resolvent_trace_dense");
  if (b.rows() > 64) throw InvalidParameter("resolvent_trace_dense: N > 64");
  auto h = hermitize(b, z).h;
  for (std::size_t i = 0; i < h.rows(); ++i) h(i, i) -= cplx(0.0, eta);
  const auto g = linalg::inverse(h);
  cplx tr = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i) tr += g(i, i);
  return tr / static_cast<double>(g.rows());
}

CountBound small_singular_value_count(const RealVector& lambda, double eta) {
  CountBound out;
  for (double l : lambda) out.count += l <= eta ? 1 : 0;
  const double n = static_cast<double>(lambda.size());
  out.bound = 2.0 * n * eta * resolvent_trace_from_values(lambda, eta).imag();
  out.holds = static_cast<double>(out.count) <= out.bound * (1.0 + 1e-12);
  return out;
}

ComplexMatrix minor(const ComplexMatrix& b, const std::vector<std::size_t>& removed) {
  std::vector<bool> drop(b.rows(), false);
  for (auto i : removed) {
    if (i >= b.rows())
      throw IndexOutOfRange("minor: row " + std::to_string(i) + " outside 0.." +
                            std::to_string(b.rows() - 1));
    drop[i] = true;
  }
  const auto kept = static_cast<std::size_t>(std::count(drop.begin(), drop.end(), false));
  ComplexMatrix out(kept, b.cols());
  std::size_t r = 0;
  for (std::size_t i = 0; i < b.rows(); ++i) {
    if (drop[i]) continue;
    std::copy(b.row(i).begin(), b.row(i).end(), out.row(r++).begin());
  }
  return out;
}

SchurMinorReport schur_minor_report(const ComplexMatrix& b, std::size_t j, double eta) {
  require_square(b, "schur_minor_report");
  require_eta(eta, "schur_minor_report");
  const std::size_t n = b.rows();
  if (j >= n) throw IndexOutOfRange("schur_minor_report: row index out of range");
  const double nd = static_cast<double>(n);

  SchurMinorReport rep;
  rep.j = j;
  rep.eta = eta;

  // Left side: (0,0) entry of the resolvent of the hermitized chain minor.
  auto h = hermitize_rect(row_block(b, j, n));
  for (std::size_t i = 0; i < h.rows(); ++i) h(i, i) -= cplx(0.0, eta);
  ComplexMatrix e0(h.rows(), 1);
  e0(0, 0) = 1.0;
  rep.lhs = 1.0 / linalg::linear_solve(h, e0)(0, 0);

  // Right side from the next minor.
  const auto basis = linalg::right_singular_basis(row_block(b, j + 1, n));
  rep.lambda = basis.values;
  rep.c.resize(n);
  rep.w.resize(n);
  double acc = 0.0;
  const auto brow = b.row(j);
  for (std::size_t i = 0; i < n; ++i) {
    const double nl = nd * rep.lambda[i], ne = nd * eta;
    rep.c[i] = ne / (nl * nl + ne * ne);
    cplx proj = 0.0;
    for (std::size_t k = 0; k < n; ++k) proj += brow[k] * basis.right_v(k, i);
    rep.w[i] = std::sqrt(nd) * std::conj(proj);
    acc += rep.c[i] * std::norm(rep.w[i]);
  }
  rep.rhs = cplx(0.0, -eta) - cplx(0.0, acc);
  rep.residual = std::abs(rep.lhs - rep.rhs) / std::abs(rep.lhs);

  rep.c_nonincreasing = true;
  for (std::size_t i = 0; i + 1 < n; ++i)
    rep.c_nonincreasing = rep.c_nonincreasing && rep.c[i] >= rep.c[i + 1];
  std::size_t k = 0;
  while (k < n && rep.lambda[k] <= eta) ++k;
  rep.c_lower_bound = true;
  const double floor = 1.0 / (2.0 * nd * eta);
  for (std::size_t i = 0; i < k; ++i)
    rep.c_lower_bound = rep.c_lower_bound && rep.c[i] >= floor * (1.0 - 1e-12);
  return rep;
}

SchurMinorReport schur_minor_report(const ComplexMatrix& b, const std::vector<std::size_t>& removed,
                                    std::size_t row, double eta) {
  require_square(b, "schur_minor_report");
  const std::size_t n = b.rows();
  std::vector<bool> used(n, false);
  std::vector<std::size_t> order;
  auto take = [&](std::size_t i) {
    if (i >= n) throw IndexOutOfRange("schur_minor_report: row index out of range");
    if (used[i]) throw InvalidParameter("schur_minor_report: repeated row index");
    used[i] = true;
    order.push_back(i);
  };
  for (auto i : removed) take(i);
  take(row);
  for (std::size_t i = 0; i < n; ++i)
    if (!used[i]) order.push_back(i);
  ComplexMatrix pb(n, n);
  for (std::size_t r = 0; r < n; ++r)
    std::copy(b.row(order[r]).begin(), b.row(order[r]).end(), pb.row(r).begin());
  return schur_minor_report(pb, removed.size(), eta);
}

QSpectral q_spectral_matrix(const ComplexMatrix& u, std::size_t k, double tol) {
  if (!u.is_square()) throw DimensionMismatch("q_spectral_matrix: U is not square");
  const std::size_t n = u.rows();
  if (k == 0 || 2 * k > n) throw InvalidParameter("q_spectral_matrix: need 1 <= k and 2k <= N");
  const double defect = frobenius_norm(adjoint(u) * u - ComplexMatrix::identity(n));
  if (defect > 1e-10) throw NonUnitary("q_spectral_matrix: ||U^dagger U - I|| exceeds 1e-10");

  QSpectral out;
  out.q = RealMatrix(2 * k, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.q(i, j) = u(i, j).real();
      out.q(k + i, j) = u(i, j).imag();
    }
  out.m = linalg::singular_values(out.q);
  for (double m : out.m) out.sum_sq += m * m;
  out.top_bounded = out.m.back() <= 1.0 + tol;
  out.middle_bounded = out.m[k] >= 1.0 / std::sqrt(static_cast<double>(k + 1)) - tol;
  return out;
}

}  // namespace girko::hermitization
