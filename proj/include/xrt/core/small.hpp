#pragma once

// Fixed-size 2-D vector and matrix helpers, generic over scalar type.

#include <array>
#include <cmath>

#include "xrt/core/autodiff.hpp"

namespace xrt {

template <class T> using Vec2 = std::array<T, 2>;
template <class T> using Mat2 = std::array<std::array<T, 2>, 2>;
// gamma[i][j][k] = Γ^i_{jk}
template <class T> using Christoffel = std::array<Mat2<T>, 2>;

template <class T>
Mat2<T> identity2() {
  return {{{T(1.0), T(0.0)}, {T(0.0), T(1.0)}}};
}

template <class T>
T det(const Mat2<T>& a) {
  return a[0][0] * a[1][1] - a[0][1] * a[1][0];
}

template <class T>
Mat2<T> inverse(const Mat2<T>& a) {
  T inv = 1.0 / det(a);
  return {{{a[1][1] * inv, -(a[0][1] * inv)}, {-(a[1][0] * inv), a[0][0] * inv}}};
}

template <class T>
Vec2<T> mul(const Mat2<T>& a, const Vec2<T>& x) {
  return {a[0][0] * x[0] + a[0][1] * x[1], a[1][0] * x[0] + a[1][1] * x[1]};
}

template <class T>
Mat2<T> mul(const Mat2<T>& a, const Mat2<T>& b) {
  Mat2<T> c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

template <class T>
T dot(const Vec2<T>& a, const Vec2<T>& b) {
  return a[0] * b[0] + a[1] * b[1];
}

// <a, b>_g
template <class T>
T inner(const Mat2<T>& g, const Vec2<T>& a, const Vec2<T>& b) {
  return dot(a, mul(g, b));
}

// Γ(a, b)^i = Γ^i_{jk} a^j b^k
template <class T>
Vec2<T> contract(const Christoffel<T>& gam, const Vec2<T>& a, const Vec2<T>& b) {
  Vec2<T> r;
  for (int i = 0; i < 2; ++i) r[i] = inner(gam[i], a, b);
  return r;
}

// Principal square root of a 2x2 SPD matrix: S = (A + sI)/t with
// s = sqrt(det A), t = sqrt(tr A + 2s).
template <class T>
Mat2<T> sqrt_spd(const Mat2<T>& a) {
  using std::sqrt;
  T s = sqrt(det(a));
  T t = sqrt(a[0][0] + a[1][1] + 2.0 * s);
  T it = 1.0 / t;
  return {{{(a[0][0] + s) * it, a[0][1] * it}, {a[1][0] * it, (a[1][1] + s) * it}}};
}

// Directional derivative of sqrt_spd(A) along dA.
template <class T>
Mat2<T> sqrt_spd_derivative(const Mat2<T>& a, const Mat2<T>& da) {
  using std::sqrt;
  T s = sqrt(det(a));
  T t = sqrt(a[0][0] + a[1][1] + 2.0 * s);
  T ddet = da[0][0] * a[1][1] + a[0][0] * da[1][1] - da[0][1] * a[1][0] - a[0][1] * da[1][0];
  T ds = ddet / (2.0 * s);
  T dt = (da[0][0] + da[1][1] + 2.0 * ds) / (2.0 * t);
  Mat2<T> r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      T num = a[i][j] + (i == j ? s : T(0.0));
      T dnum = da[i][j] + (i == j ? ds : T(0.0));
      r[i][j] = dnum / t - num * dt / (t * t);
    }
  return r;
}

}  // namespace xrt
