#include "girko/mde/mde.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "girko/hermitization/hermitization.hpp"

namespace girko::mde {
namespace {

// dF/dm = (1/N) sum (s^2 + zeta^2) / (s^2 - zeta^2)^2
cplx mde_derivative(const RealVector& s, cplx zeta) {
  cplx acc = 0.0;
  const cplx z2 = zeta * zeta;
  for (double si : s) {
    const cplx d = si * si - z2;
    acc += (si * si + z2) / (d * d);
  }
  return acc / static_cast<double>(s.size());
}

struct Iterate {
  cplx m;
  double residual;
  int iterations;
};

// Newton on g(m) = F(m) - m with a backtracking line search that keeps
// Im m > 0; falls back to the damped map when no Newton step helps.
Iterate converge(const RealVector& s, cplx w, cplx m, const MdeOptions& opt, int budget) {
  double alpha = opt.damping;
  cplx f = mde_map(s, w, m);
  double res = std::abs(f - m);
  int it = 0;
  while (res > opt.tol) {
    if (it >= budget) return {m, res, it};
    ++it;
    const cplx g = f - m;
    const cplx gp = mde_derivative(s, w + m) - 1.0;
    bool moved = false;
    if (std::abs(gp) > 0.0) {
      cplx step = -g / gp;
      for (int half = 0; half < 30; ++half, step *= 0.5) {
        const cplx trial = m + step;
        if (!(trial.imag() > 0.0)) continue;
        const cplx ft = mde_map(s, w, trial);
        const double rt = std::abs(ft - trial);
        if (rt < res) {
          m = trial;
          f = ft;
          res = rt;
          moved = true;
          break;
        }
      }
    }
    if (moved) continue;
    cplx next = (1.0 - alpha) * m + alpha * f;
    if (!(next.imag() > 0.0)) next.imag(std::max(1e-300, 0.5 * m.imag()));
    const cplx fn = mde_map(s, w, next);
    const double rn = std::abs(fn - next);
    if (rn > res) alpha = std::max(alpha * 0.5, 1e-6);
    m = next;
    f = fn;
    res = rn;
  }
  return {m, res, it};
}

void require_upper(cplx w) {
  if (!(w.imag() > 0.0) || !std::isfinite(w.real()) || !std::isfinite(w.imag()))
    throw InvalidParameter("solve_mde: Im w must be positive");
}

}  // namespace

cplx mde_map(const RealVector& s, cplx w, cplx m) {
  const cplx zeta = w + m;
  const cplx z2 = zeta * zeta;
  cplx acc = 0.0;
  for (double si : s) acc += zeta / (si * si - z2);
  return acc / static_cast<double>(s.size());
}

MdeSolution solve_mde(const RealVector& s, cplx w, const MdeOptions& opt) {
  require_upper(w);
  if (s.empty()) throw InvalidParameter("solve_mde: empty singular value list");

  // Continuation in Im w from the well-conditioned region down to the target.
  const double target = w.imag();
  std::vector<double> etas;
  for (double eta = std::max(1.0, target); eta > target; eta *= 0.25) etas.push_back(eta);
  etas.push_back(target);

  cplx m(0.0, 1.0);
  int used = 0;
  double res = 0.0;
  for (double eta : etas) {
    const cplx we(w.real(), eta);
    auto r = converge(s, we, m, opt, opt.max_iterations - used);
    used += r.iterations;
    m = r.m;
    res = r.residual;
    if (res > opt.tol)
      throw NonConvergence("solve_mde: no convergence within " +
                           std::to_string(opt.max_iterations) + " iterations");
  }
  return {w, m, res, used, m.imag() / std::numbers::pi};
}

MdeSolution solve_mde(const ComplexMatrix& a, cplx z, cplx w, const MdeOptions& opt) {
  require_upper(w);
  return solve_mde(hermitization::shifted_singular_values(a, z), w, opt);
}

ComplexMatrix mde_matrix(const ComplexMatrix& a, cplx z, const MdeSolution& sol) {
  auto h = hermitization::hermitize(a, z).h;
  const cplx zeta = sol.w + sol.m;
  for (std::size_t i = 0; i < h.rows(); ++i) h(i, i) -= zeta;
  return linalg::inverse(h);
}

double scdos(const RealVector& s, double x, double eta0) {
  if (!(eta0 > 0.0)) throw InvalidParameter("scdos: eta0 must be positive");
  // The symmetrized spectrum makes rho even; evaluate at |x| so that the
  // symmetry is exact.
  const double ax = std::abs(x);
  const double r1 = solve_mde(s, cplx(ax, eta0)).scdos;
  const double r2 = solve_mde(s, cplx(ax, 0.5 * eta0)).scdos;
  const double rho = std::abs(r1 - r2) > 1e-4 ? 2.0 * r2 - r1 : r1;
  return std::max(rho, 0.0);
}

double scdos(const ComplexMatrix& a, cplx z, double x, double eta0) {
  return scdos(hermitization::shifted_singular_values(a, z), x, eta0);
}

BulkQuery in_bulk(const RealVector& s, double tau) {
  if (!(tau > 0.0)) throw InvalidParameter("in_bulk: tau must be positive");
  BulkQuery q;
  q.tau = tau;
  for (double si : s) q.value += 1.0 / (si * si + tau * tau);
  q.value /= static_cast<double>(s.size());
  q.in_bulk = q.value > 1.0;
  return q;
}

BulkQuery in_bulk(const ComplexMatrix& a, cplx z, double tau) {
  if (!(tau > 0.0)) throw InvalidParameter("in_bulk: tau must be positive");
  return in_bulk(hermitization::shifted_singular_values(a, z), tau);
}

CumulativeDos::CumulativeDos(RealVector s, double eta0, std::size_t panels)
    : s_(std::move(s)), eta0_(eta0) {
  if (s_.empty() || panels == 0) throw InvalidParameter("CumulativeDos: empty input");
  // The noise part has norm 2, so the support lies in [-(s_max + 2), s_max + 2].
  x_max_ = *std::max_element(s_.begin(), s_.end()) + 2.5;
  h_ = x_max_ / static_cast<double>(panels);
  table_.assign(panels + 1, 0.0);
  for (std::size_t k = 0; k < panels; ++k)
    table_[k + 1] = table_[k] + panel_integral(k * h_, (k + 1) * h_);
}

double CumulativeDos::density(double x) const { return scdos(s_, x, eta0_); }

double CumulativeDos::panel_integral(double a, double b) const {
  return boost::math::quadrature::gauss<double, 8>::integrate(
      [this](double x) { return density(x); }, a, b);
}

double CumulativeDos::cumulative(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= x_max_) return table_.back();
  const auto k = std::min(table_.size() - 2, static_cast<std::size_t>(x / h_));
  return table_[k] + panel_integral(k * h_, x);
}

double CumulativeDos::quantile(double p) const {
  if (!(p > 0.0)) throw InvalidParameter("quantile: mass must be positive");
  if (p >= table_.back())
    throw QuantileOutOfSupport("quantile: mass " + std::to_string(p) + " beyond half mass " +
                               std::to_string(table_.back()));
  const auto it = std::upper_bound(table_.begin(), table_.end(), p);
  const auto k = static_cast<std::size_t>(it - table_.begin()) - 1;
  // Bisection safeguarded by Newton steps (the derivative is the density).
  double lo = k * h_, hi = (k + 1) * h_;
  const double need = p - table_[k];
  const double a = lo;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double defect = panel_integral(a, x) - need;
    if (std::abs(defect) <= 1e-15) return x;
    (defect < 0.0 ? lo : hi) = x;
    const double rho = density(x);
    const double nx = rho > 0.0 ? x - defect / rho : lo - 1.0;
    x = (nx > lo && nx < hi) ? nx : 0.5 * (lo + hi);
  }
  return x;
}

cplx overlap_q(const linalg::SingularSystem& svd, cplx w, const MdeSolution& sol) {
  // Top-right block of Im M is sum_k Im(s_k / (s_k^2 - zeta^2)) u_k v_k^dagger.
  const cplx zeta = w + sol.m;
  const std::size_t n = svd.values.size();
  cplx acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = svd.values[k];
    const double coef = s * (1.0 / (s * s - zeta * zeta)).imag();
    cplx vu = 0.0;
    for (std::size_t r = 0; r < n; ++r) vu += std::conj(svd.right_v(r, k)) * svd.left_u(r, k);
    acc += coef * vu;
  }
  return acc / (2.0 * static_cast<double>(n)) / sol.m.imag();
}

OverlapProfile overlap_profile(const ComplexMatrix& a, cplx z, std::size_t count, double eta0) {
  if (!a.is_square()) throw DimensionMismatch("overlap_profile: matrix is not square");
  const std::size_t n = a.rows();
  if (count == 0) throw InvalidParameter("overlap_profile: count must be positive");
  if (count > n) throw QuantileOutOfSupport("overlap_profile: count exceeds N");
  const auto svd = hermitization::singular_system(a, z);
  const CumulativeDos dos(svd.values, eta0);

  OverlapProfile out;
  const double nd = static_cast<double>(n);
  for (std::size_t i = 1; i <= count; ++i) {
    const double g = dos.quantile(static_cast<double>(i) / (2.0 * nd));
    const cplx w(g, eta0);
    const auto sol = solve_mde(svd.values, w);
    out.gamma.push_back(g);
    out.q.push_back(overlap_q(svd, w, sol));
    out.index_over_n.push_back(static_cast<double>(i) / nd);
  }
  return out;
}

}  // namespace girko::mde
