#include "girko/cli/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>

#include "girko/ensembles/ensembles.hpp"
#include "girko/hermitization/hermitization.hpp"
#include "girko/linalg/decompositions.hpp"
#include "girko/mde/mde.hpp"
#include "girko/stats/spectral_stats.hpp"

namespace girko::cli {
namespace {

using ensembles::CounterRng;
using ensembles::SeedStream;

// Each check owns a block of trial indices so draws never collide.
constexpr std::uint64_t kBlock = 1000000;

struct Draws {
  std::uint64_t seed;
  std::uint64_t block;

  SeedStream stream(std::uint64_t t) const { return {seed, block * kBlock + t}; }

  ComplexMatrix complex(std::size_t n, std::uint64_t t) const {
    return ensembles::sample_matrix(ensembles::parse_ensemble("ginibre-complex", n), stream(t));
  }
  RealMatrix real(std::size_t n, std::uint64_t t) const {
    return ensembles::sample_real_matrix(ensembles::parse_ensemble("ginibre-real", n), stream(t));
  }
  // Independent uniform stream for the instance parameters.
  CounterRng rng(std::uint64_t t) const { return CounterRng({seed ^ 0x5bd1e995u, block * kBlock + t}); }
};

VerifyCheck timed(const char* name, double tol, const std::function<void(VerifyCheck&)>& body) {
  VerifyCheck c;
  c.name = name;
  c.tolerance = tol;
  const auto t0 = std::chrono::steady_clock::now();
  body(c);
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.pass = c.violations == 0 && c.worst <= tol;
  return c;
}

void record(VerifyCheck& c, double err, bool ok = true) {
  ++c.instances;
  if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
  c.worst = std::max(c.worst, err);
  if (!ok || err > c.tolerance) ++c.violations;
}

double min_gap(const ComplexVector& sigma, std::size_t i) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < sigma.size(); ++j)
    if (j != i) g = std::min(g, std::abs(sigma[j] - sigma[i]));
  return g;
}

// Gram-Schmidt (two passes) on a complex Gaussian matrix is Haar distributed.
ComplexMatrix haar_unitary(const ComplexMatrix& g) {
  const std::size_t n = g.rows();
  ComplexMatrix q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    ComplexVector v = g.column(j);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t p = 0; p < j; ++p) {
        cplx c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += std::conj(q(i, p)) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * q(i, p);
      }
    const double s = norm2(v);
    for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] / s;
  }
  return q;
}

VerifyCheck bi_orthogonality(const Draws& d) {
  return timed("bi_orthogonality", 1e-8, [&](VerifyCheck& c) {
    const std::size_t sizes[] = {4, 8, 16, 32, 64};
    for (std::uint64_t t = 0; t < 50; ++t) {
      const std::size_t n = sizes[t % 5];
      const auto sd = linalg::complex_eig(d.complex(n, t));
      auto g = adjoint(sd.left) * sd.right;
      for (std::size_t i = 0; i < n; ++i) g(i, i) -= 1.0;
      record(c, std::max(max_abs(g), sd.residual));
    }
  });
}

VerifyCheck svd_hermitization(const Draws& d) {
  return timed("svd_hermitization", 1e-12, [&](VerifyCheck& c) {
    const std::size_t sizes[] = {4, 8, 16, 32};
    for (std::uint64_t t = 0; t < 50; ++t) {
      const std::size_t n = sizes[t % 4];
      const auto rng = d.rng(t);
      const cplx z(2.0 * rng.uniform(0) - 1.0, 2.0 * rng.uniform(1) - 1.0);
      const auto b = d.complex(n, t);
      const auto mu = linalg::hermitian_eigenvalues(hermitization::hermitize(b, z).h);
      const auto lambda = hermitization::shifted_singular_values(b, z);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        err = std::max(err, std::abs(mu[n - 1 - i] + lambda[i]));
        err = std::max(err, std::abs(mu[n + i] - lambda[i]));
      }
      record(c, err);
    }
  });
}

VerifyCheck schur_minor(const Draws& d) {
  return timed("schur_minor", 1e-9, [&](VerifyCheck& c) {
    for (std::uint64_t t = 0; t < 50; ++t) {
      const auto rep = hermitization::schur_minor_report(d.complex(6, t), t % 5, 0.1 / 6.0);
      record(c, rep.residual, rep.c_nonincreasing && rep.c_lower_bound);
    }
  });
}

VerifyCheck interlacing(const Draws& d) {
  return timed("interlacing", 0.0, [&](VerifyCheck& c) {
    const std::size_t sizes[] = {4, 8, 16};
    for (std::uint64_t t = 0; t < 200; ++t) {
      const std::size_t n = sizes[t % 3];
      const auto rng = d.rng(t);
      std::vector<std::size_t> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = i;
      for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.bits(i) % (i + 1)]);
      const std::size_t m = rng.bits(n) % (n - 1);
      const std::vector<std::size_t> removed(perm.begin(), perm.begin() + m);
      record(c, 0.0, stats::interlacing_report(d.complex(n, t), removed, perm[m]).holds);
    }
  });
}

VerifyCheck weyl(const Draws& d) {
  return timed("weyl", 0.0, [&](VerifyCheck& c) {
    for (std::uint64_t t = 0; t < 200; ++t) {
      const auto rng = d.rng(t);
      const cplx z(2.0 * rng.uniform(0) - 1.0, 2.0 * rng.uniform(1) - 1.0);
      record(c, 0.0, stats::weyl_report(d.complex(t % 2 ? 10 : 6, t), z).holds);
    }
  });
}

VerifyCheck contour_projector(const Draws& d) {
  return timed("contour_projector", 1e-6, [&](VerifyCheck& c) {
    const std::size_t n = 8;
    for (std::uint64_t t = 0; t < 20; ++t) {
      const auto b = d.complex(n, t);
      const auto sd = linalg::complex_eig(b);
      const std::size_t i = t % n;
      const auto p = stats::contour_projector(b, sd.sigma[i], 0.45 * min_gap(sd.sigma, i));
      double err = 0.0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t k = 0; k < n; ++k)
          err = std::max(err, std::abs(p(a, k) - sd.right(a, i) * std::conj(sd.left(k, i))));
      record(c, err);
    }
  });
}

VerifyCheck realification(const Draws& d) {
  return timed("realification", 1e-13, [&](VerifyCheck& c) {
    for (std::uint64_t t = 0; t < 50; ++t) {
      const std::size_t n = t % 2 ? 16 : 8;
      const auto a = d.complex(n, 2 * t);
      const auto b = d.complex(n, 2 * t + 1);
      const auto lhs = linalg::realify(a * b);
      const auto rhs = linalg::realify(a) * linalg::realify(b);
      double err = 0.0;
      for (std::size_t k = 0; k < lhs.size(); ++k)
        err = std::max(err, std::abs(lhs.storage()[k] - rhs.storage()[k]));
      record(c, err);
    }
  });
}

VerifyCheck q_bounds(const Draws& d) {
  return timed("q_matrix_bounds", 1e-10, [&](VerifyCheck& c) {
    for (std::uint64_t t = 0; t < 100; ++t) {
      const auto u = haar_unitary(d.complex(8, t));
      for (std::size_t k = 1; k <= 3; ++k) {
        const auto q = hermitization::q_spectral_matrix(u, k);
        record(c, std::abs(q.sum_sq - static_cast<double>(k)), q.top_bounded && q.middle_bounded);
      }
    }
  });
}

VerifyCheck real_shift(const Draws& d) {
  return timed("real_shift_lemma", 0.0, [&](VerifyCheck& c) {
    for (std::uint64_t t = 0; t < 100; ++t) {
      const std::size_t n = t % 2 ? 16 : 8;
      record(c, 0.0, stats::real_shift_bound_check(d.real(n, 2 * t), d.real(n, 2 * t + 1)).holds);
    }
  });
}

VerifyCheck phase_floor(const Draws& d) {
  return timed("phase_floor", 1e-6, [&](VerifyCheck& c) {
    for (std::uint64_t t = 0; t < 100; ++t) {
      ComplexVector v = d.complex(5 + t % 7, t).column(0);
      const double s = norm2(v);
      for (auto& x : v) x /= s;
      record(c, std::abs(stats::phase_floor(v).floor - stats::phase_floor_scan(v, 10000)));
    }
  });
}

VerifyCheck mde_semicircle(const Draws&) {
  return timed("mde_semicircle", 1e-5, [&](VerifyCheck& c) {
    record(c, std::abs(mde::scdos(RealVector{0.0}, 0.0) - std::numbers::inv_pi));
  });
}

VerifyCheck mde_residual(const Draws& d) {
  return timed("mde_residual", 1e-12, [&](VerifyCheck& c) {
    for (std::uint64_t t = 0; t < 20; ++t) {
      const auto rng = d.rng(t);
      const auto a = d.complex(8, t);
      const cplx z(rng.uniform(0) - 0.5, rng.uniform(1) - 0.5);
      for (double eta : {1.0, 1e-2, 1e-4})
        record(c, mde::solve_mde(a, z, cplx(0.0, eta)).residual);
    }
  });
}

VerifyCheck bulk_disk(const Draws&) {
  return timed("bulk_map_disk", 0.0, [&](VerifyCheck& c) {
    const double tau = 0.2;
    const double radius = std::sqrt(1.0 - tau * tau);
    const int g = 61;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        const cplx z(-1.2 + 2.4 * i / (g - 1), -1.2 + 2.4 * j / (g - 1));
        if (std::abs(std::abs(z) - radius) <= 1e-6) continue;
        const bool inside = mde::in_bulk(RealVector{std::abs(z)}, tau).in_bulk;
        record(c, 0.0, inside == (std::abs(z) < radius));
      }
  });
}

VerifyCheck girko_identity(const Draws& d) {
  return timed("girko_identity", 1e-2, [&](VerifyCheck& c) {
    const stats::Bump bump{0.0, 0.5};
    for (std::uint64_t t = 0; t < 1000; ++t) {
      const auto b = d.complex(4, t);
      const auto sigma = linalg::eigenvalues(b);
      if (std::none_of(sigma.begin(), sigma.end(), [&](cplx s) { return std::abs(s) <= 0.25; })) continue;
      record(c, stats::girko_residual(b, bump, 160).rel_err);
      return;
    }
    record(c, 0.0, false);
  });
}

}  // namespace

std::vector<VerifyCheck> run_verify(std::uint64_t seed) {
  using Check = VerifyCheck (*)(const Draws&);
  const Check checks[] = {bi_orthogonality, svd_hermitization, schur_minor,    interlacing,
                          weyl,             contour_projector, realification,  q_bounds,
                          real_shift,       phase_floor,       mde_semicircle, mde_residual,
                          bulk_disk,        girko_identity};
  std::vector<VerifyCheck> out;
  std::uint64_t block = 1;
  for (auto check : checks) out.push_back(check(Draws{seed, block++}));
  return out;
}

std::string format_check(const VerifyCheck& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %-20s instances=%zu violations=%zu worst=%.3g tol=%.3g (%.2f s)",
                c.pass ? "PASS" : "FAIL", c.name.c_str(), c.instances, c.violations, c.worst, c.tolerance,
                c.seconds);
  return buf;
}

}  // namespace girko::cli
