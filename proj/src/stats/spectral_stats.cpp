#include "girko/stats/spectral_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "girko/hermitization/hermitization.hpp"

namespace girko::stats {
namespace {

constexpr double kPi = std::numbers::pi;

void require_square(const ComplexMatrix& b, const char* who) {
  if (!b.is_square()) throw DimensionMismatch(std::string(who) + ": matrix is not square");
}

double smallest_singular_value(const ComplexMatrix& m) { return linalg::singular_values(m).front(); }

RealVector padded_singular_values(const ComplexMatrix& m) {
  RealVector v(m.cols() - m.rows(), 0.0);
  const auto s = linalg::singular_values(m);
  v.insert(v.end(), s.begin(), s.end());
  return v;
}

}  // namespace

OverlapMatrix overlaps(const linalg::SpectralDecomposition& d) {
  const std::size_t n = d.sigma.size();
  ComplexMatrix ll(n, n), rr(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx a = 0.0, b = 0.0;
      for (std::size_t k = 0; k < d.left.rows(); ++k) {
        a += std::conj(d.left(k, i)) * d.left(k, j);
        b += std::conj(d.right(k, i)) * d.right(k, j);
      }
      ll(i, j) = a;
      rr(i, j) = b;
    }
  OverlapMatrix out{ComplexMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.o(i, j) = ll(i, j) * rr(j, i);
  for (std::size_t i = 0; i < n; ++i) out.o(i, i) = out.o(i, i).real();
  return out;
}

std::size_t contour_nodes(const ComplexMatrix& b, cplx z0, double r) {
  if (!(r > 0.0)) throw InvalidParameter("contour_projector: radius must be positive");
  const auto sigma = linalg::eigenvalues(b);
  double rho = 0.0;
  for (auto s : sigma) {
    const double d = std::abs(s - z0);
    if (std::abs(d - r) < 0.05 * r)
      throw ContourTooClose("contour_projector: eigenvalue within 0.05 r of the contour");
    rho = std::max(rho, d < r ? d / r : r / d);
  }
  // The trapezoid error decays like rho^npts.
  std::size_t gap = 0;
  if (rho > 0.0) gap = static_cast<std::size_t>(std::ceil(std::log(1e-12) / std::log(rho)));
  const auto scale = static_cast<std::size_t>(16.0 * std::ceil(linalg::operator_norm(b) / r));
  return std::max({std::size_t{64}, scale, gap});
}

ComplexMatrix contour_projector(const ComplexMatrix& b, cplx z0, double r, std::size_t npts) {
  require_square(b, "contour_projector");
  const std::size_t auto_n = contour_nodes(b, z0, r);
  const std::size_t n = npts == 0 ? auto_n : npts;
  const std::size_t dim = b.rows();
  ComplexMatrix acc(dim, dim);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx e = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
    const cplx w = z0 + r * e;
    ComplexMatrix m = cplx(-1.0) * b;
    for (std::size_t i = 0; i < dim; ++i) m(i, i) += w;
    acc += (r * e) * linalg::inverse(m);
  }
  acc *= cplx(1.0 / static_cast<double>(n));
  return acc;
}

RealVector variational_condition(const ComplexMatrix& b, std::size_t i, const RealVector& radii) {
  require_square(b, "variational_condition");
  const auto d = linalg::complex_eig(b);
  if (i >= d.sigma.size()) throw IndexOutOfRange("variational_condition: eigenvalue index");
  const cplx dirs[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  RealVector out;
  for (double radius : radii) {
    if (!(radius > 0.0)) throw InvalidParameter("variational_condition: radii must be positive");
    double acc = 0.0;
    for (auto dir : dirs) {
      const cplx z = d.sigma[i] + radius * dir;
      acc += radius / smallest_singular_value(shifted(b, z));
    }
    out.push_back(acc / 4.0);
  }
  return out;
}

double Bump::value(cplx z) const {
  const double t = std::norm((z - z0) / r);
  if (t >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t));
}

double Bump::laplacian(cplx z) const {
  // f_0 = g(t), t = |u|^2: Delta_u f_0 = 4 (g' + t g'').
  const double t = std::norm((z - z0) / r);
  if (t >= 1.0) return 0.0;
  const double s = 1.0 - t;
  const double g = std::exp(1.0 - 1.0 / s);
  const double g1 = -g / (s * s);
  const double g2 = g * (1.0 / (s * s * s * s) - 2.0 / (s * s * s));
  return 4.0 * (g1 + t * g2) / (r * r);
}

GirkoReport girko_residual(const ComplexMatrix& b, const Bump& bump, std::size_t grid_n) {
  require_square(b, "girko_residual");
  if (grid_n == 0) throw InvalidParameter("girko_residual: empty grid");
  if (!(bump.r > 0.0)) throw InvalidParameter("girko_residual: bump radius must be positive");

  GirkoReport rep;
  rep.grid_n = grid_n;
  for (auto s : linalg::eigenvalues(b)) rep.lhs += bump.value(s);

  const double h = 2.0 * bump.r / static_cast<double>(grid_n);
  rep.spacing = h;
  double acc = 0.0;
  for (std::size_t a = 0; a < grid_n; ++a) {
    const double x = bump.z0.real() - bump.r + (static_cast<double>(a) + 0.5) * h;
    for (std::size_t c = 0; c < grid_n; ++c) {
      const double y = bump.z0.imag() - bump.r + (static_cast<double>(c) + 0.5) * h;
      const cplx z(x, y);
      const double lap = bump.laplacian(z);
      if (lap == 0.0) continue;
      const auto lambda = linalg::singular_values(shifted(b, z));
      if (lambda.front() < 1e-14)
        throw GridUnderflow("girko_residual: grid point collides with an eigenvalue");
      double kernel = 0.0;
      for (double l : lambda) kernel += std::log(l);
      acc += lap * kernel;
    }
  }
  rep.rhs = acc * h * h / (2.0 * kPi);
  rep.abs_err = std::abs(rep.lhs - rep.rhs);
  rep.rel_err = rep.lhs != 0.0 ? rep.abs_err / std::abs(rep.lhs) : rep.abs_err;
  return rep;
}

WeylReport weyl_report(const ComplexMatrix& b, cplx z, double tol) {
  require_square(b, "weyl_report");
  auto sigma = linalg::eigenvalues(b);
  RealVector dist(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) dist[i] = std::abs(sigma[i] - z);
  std::sort(dist.begin(), dist.end());
  const auto lambda = linalg::singular_values(shifted(b, z));

  WeylReport rep;
  rep.holds = true;
  rep.min_margin = std::numeric_limits<double>::infinity();
  double ls = 0.0, ll = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    ls += std::log(dist[k]);
    ll += std::log(lambda[k]);
    double margin;
    if (std::isinf(ll) && ll < 0.0)
      margin = (std::isinf(ls) && ls < 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
    else
      margin = ls - ll;
    rep.log_margins.push_back(margin);
    rep.min_margin = std::min(rep.min_margin, margin);
    if (margin < -tol) rep.holds = false;
  }
  return rep;
}

InterlacingReport interlacing_report(const ComplexMatrix& b, const std::vector<std::size_t>& removed,
                                     std::size_t i, double tol) {
  require_square(b, "interlacing_report");
  if (i >= b.rows()) throw IndexOutOfRange("interlacing_report: row index out of range");
  if (std::find(removed.begin(), removed.end(), i) != removed.end())
    throw InvalidParameter("interlacing_report: row already removed");
  auto next = removed;
  next.push_back(i);

  InterlacingReport rep;
  rep.outer = padded_singular_values(hermitization::minor(b, removed));
  rep.inner = padded_singular_values(hermitization::minor(b, next));
  rep.min_margin = std::numeric_limits<double>::infinity();
  const double scale = std::max(1.0, frobenius_norm(b));
  for (std::size_t k = 0; k < rep.outer.size(); ++k) {
    rep.min_margin = std::min(rep.min_margin, rep.outer[k] - rep.inner[k]);
    if (k + 1 < rep.inner.size())
      rep.min_margin = std::min(rep.min_margin, rep.inner[k + 1] - rep.outer[k]);
  }
  rep.holds = rep.min_margin >= -tol * scale;
  return rep;
}

PhaseFloor phase_floor(const ComplexVector& v) {
  const double nv = norm2(v);
  if (std::abs(nv - 1.0) > 1e-10) throw InvalidParameter("phase_floor: vector must have unit norm");
  RealMatrix m(v.size(), 2);
  double a = 0.0, bb = 0.0, c = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    m(k, 0) = v[k].real();
    m(k, 1) = v[k].imag();
    a += v[k].real() * v[k].real();
    bb += v[k].real() * v[k].imag();
    c += v[k].imag() * v[k].imag();
  }
  PhaseFloor out;
  out.floor = linalg::singular_values(m).front();
  // ||Re[e^{it} v]||^2 = (a+c)/2 + (a-c)/2 cos 2t - b sin 2t; the minimizing
  // direction (cos t, -sin t) is the bottom right singular vector.
  out.theta_star = 0.5 * std::atan2(bb, 0.5 * (c - a));
  return out;
}

double phase_floor_scan(const ComplexVector& v, std::size_t angles) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < angles; ++k) {
    const cplx e = std::polar(1.0, kPi * static_cast<double>(k) / static_cast<double>(angles));
    double s = 0.0;
    for (auto x : v) s += std::pow((e * x).real(), 2);
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

RealShiftReport real_shift_bound_check(const RealMatrix& y, const RealMatrix& b_im) {
  if (!y.is_square() || y.rows() != b_im.rows() || y.cols() != b_im.cols())
    throw DimensionMismatch("real_shift_bound_check: Y and B must be square of equal size");
  const std::size_t n = y.rows();
  if (n < 2) throw InvalidParameter("real_shift_bound_check: need N >= 2");
  RealShiftReport rep;
  rep.lambda1 = linalg::singular_values(b_im).front();
  if (!(rep.lambda1 > 1e-8)) throw InvalidParameter("real_shift_bound_check: lambda_1(B) <= 1e-8");

  ComplexMatrix yb(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) yb(i, j) = cplx(y(i, j), b_im(i, j));
  const auto v = linalg::kernel_vector(row_block(yb, 1, n));
  const auto w = linalg::kernel_vector(row_block(to_complex(b_im), 1, n));

  const auto jy = row_block(y, 1, n);
  ComplexVector jyw(n - 1, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t k = 0; k < n; ++k) jyw[i] += jy(i, k) * w[k];
  const double nb = linalg::operator_norm(b_im);
  const double ny = linalg::operator_norm(jy);
  const double floor = phase_floor(v).floor;
  rep.lhs = floor * floor;
  const double jw = norm2(jyw);
  rep.rhs = rep.lambda1 * rep.lambda1 * jw * jw / (5.0 * std::pow(ny + nb, 4));
  rep.holds = rep.lhs >= rep.rhs * (1.0 - 1e-12);
  return rep;
}

}  // namespace girko::stats
