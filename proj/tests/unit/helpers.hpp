#pragma once

#include <random>

#include "girko/linalg/matrix.hpp"

namespace girko::testing {

inline ComplexMatrix random_complex(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  ComplexMatrix m(r, c);
  for (auto& x : m.storage()) x = cplx(nd(gen), nd(gen)) / std::sqrt(2.0 * r);
  return m;
}

inline RealMatrix random_real(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  RealMatrix m(r, c);
  for (auto& x : m.storage()) x = nd(gen) / std::sqrt(double(r));
  return m;
}

inline ComplexVector random_unit(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  ComplexVector v(n);
  double s = 0.0;
  for (auto& x : v) {
    x = cplx(nd(gen), nd(gen));
    s += std::norm(x);
  }
  for (auto& x : v) x /= std::sqrt(s);
  return v;
}

// Haar unitary via Gram-Schmidt on a Gaussian matrix with phase fix.
inline ComplexMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
  ComplexMatrix g = random_complex(n, n, seed);
  ComplexMatrix q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    ComplexVector v = g.column(j);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t p = 0; p < j; ++p) {
        cplx c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += std::conj(q(i, p)) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * q(i, p);
      }
    double s = 0.0;
    for (auto& x : v) s += std::norm(x);
    for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] / std::sqrt(s);
  }
  return q;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a.storage()[i] - b.storage()[i]));
  return d;
}

}  // namespace girko::testing
