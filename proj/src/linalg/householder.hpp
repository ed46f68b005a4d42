#pragma once

#include <cmath>
#include <vector>

#include "girko/linalg/matrix.hpp"

namespace girko::linalg::detail {

/// Hermitian reflector P = I - beta u u^dagger with P x = alpha e_1.
template <typename T>
struct Reflector {
  std::vector<T> u;
  double beta = 0.0;
  T alpha{};
};

template <typename T>
Reflector<T> make_reflector(std::vector<T> x) {
  Reflector<T> h;
  double xnorm = 0.0;
  for (const auto& v : x) xnorm += abs2(v);
  xnorm = std::sqrt(xnorm);
  if (xnorm == 0.0) {
    h.u = std::move(x);
    return h;
  }
  T phase{1};
  if (std::abs(x[0]) != 0.0) phase = x[0] / std::abs(x[0]);
  x[0] += phase * xnorm;
  double unorm2 = 0.0;
  for (const auto& v : x) unorm2 += abs2(v);
  h.beta = 2.0 / unorm2;
  h.alpha = -phase * xnorm;
  h.u = std::move(x);
  return h;
}

/// A[r0:, c0:c1] <- P A[r0:, c0:c1].
template <typename T>
void apply_left(Matrix<T>& a, const Reflector<T>& h, std::size_t r0, std::size_t c0,
                std::size_t c1) {
  if (h.beta == 0.0) return;
  const std::size_t len = h.u.size();
  std::vector<T> t(c1 - c0, T{});
  for (std::size_t i = 0; i < len; ++i) {
    const T ui = conj_of(h.u[i]);
    const T* ai = a.row(r0 + i).data();
    for (std::size_t j = c0; j < c1; ++j) t[j - c0] += ui * ai[j];
  }
  for (std::size_t i = 0; i < len; ++i) {
    const T ui = h.beta * h.u[i];
    T* ai = a.row(r0 + i).data();
    for (std::size_t j = c0; j < c1; ++j) ai[j] -= ui * t[j - c0];
  }
}

/// A[r0:r1, c0:] <- A[r0:r1, c0:] P.
template <typename T>
void apply_right(Matrix<T>& a, const Reflector<T>& h, std::size_t r0, std::size_t r1,
                 std::size_t c0) {
  if (h.beta == 0.0) return;
  const std::size_t len = h.u.size();
  for (std::size_t i = r0; i < r1; ++i) {
    T* ai = a.row(i).data() + c0;
    T t{};
    for (std::size_t j = 0; j < len; ++j) t += ai[j] * h.u[j];
    t *= h.beta;
    for (std::size_t j = 0; j < len; ++j) ai[j] -= t * conj_of(h.u[j]);
  }
}

}  // namespace girko::linalg::detail
