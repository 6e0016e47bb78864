#pragma once

// Pointwise algebra of covariant tensors on a 2-dimensional space.
//
// A symmetric order-m tensor is stored by q = number of slots holding index 2
// (q = 0..m). A general order-m tensor is stored densely with 2^m entries;
// bit s of the flat index is set when slot s holds index 2.

#include <array>
#include <bit>
#include <stdexcept>

#include "xrt/core/small.hpp"

namespace xrt::tensor {

inline constexpr int kMaxOrder = 4;

template <class T> using Components = std::array<T, kMaxOrder + 1>;

template <class T>
struct Dense {
  int order = 0;
  std::array<T, (1 << kMaxOrder)> c{};
};

constexpr int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

template <class T>
Components<T> zero_components() {
  Components<T> c;
  c.fill(T(0.0));
  return c;
}

template <class T>
Dense<T> to_dense(int order, const Components<T>& f) {
  Dense<T> d;
  d.order = order;
  for (int idx = 0; idx < (1 << order); ++idx) d.c[idx] = f[std::popcount(static_cast<unsigned>(idx))];
  return d;
}

// Average over all index permutations: each class q receives the mean of the
// entries whose index multiset has q twos.
template <class T>
Components<T> symmetrize(const Dense<T>& h) {
  Components<T> out = zero_components<T>();
  for (int idx = 0; idx < (1 << h.order); ++idx) out[std::popcount(static_cast<unsigned>(idx))] += h.c[idx];
  for (int q = 0; q <= h.order; ++q) out[q] /= static_cast<double>(binomial(h.order, q));
  return out;
}

// (a ⊗ b) with the slots of a first.
template <class T>
Dense<T> outer(const Dense<T>& a, const Dense<T>& b) {
  if (a.order + b.order > kMaxOrder) throw std::out_of_range("tensor product exceeds the supported order");
  Dense<T> r;
  r.order = a.order + b.order;
  for (int i = 0; i < (1 << a.order); ++i)
    for (int j = 0; j < (1 << b.order); ++j) r.c[i | (j << a.order)] = a.c[i] * b.c[j];
  return r;
}

template <class T>
Dense<T> dense_matrix(const Mat2<T>& g) {
  Dense<T> d;
  d.order = 2;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d.c[i | (j << 1)] = g[i][j];
  return d;
}

// f(v, …, v) = Σ_q C(m,q) f_q v1^{m−q} v2^q
template <class T>
T contract_lambda(int order, const Components<T>& f, const Vec2<T>& v) {
  T s(0.0);
  for (int q = 0; q <= order; ++q) {
    T term = f[q] * static_cast<double>(binomial(order, q));
    for (int k = 0; k < order - q; ++k) term *= v[0];
    for (int k = 0; k < q; ++k) term *= v[1];
    s += term;
  }
  return s;
}

// f(w, v, …, v) for order ≥ 1.
template <class T>
T contract_partial(int order, const Components<T>& f, const Vec2<T>& w, const Vec2<T>& v) {
  T s(0.0);
  // Slot 0 fixed to index a; the remaining m−1 slots carry r twos.
  for (int a = 0; a < 2; ++a)
    for (int r = 0; r <= order - 1; ++r) {
      T term = w[a] * f[r + a] * static_cast<double>(binomial(order - 1, r));
      for (int k = 0; k < order - 1 - r; ++k) term *= v[0];
      for (int k = 0; k < r; ++k) term *= v[1];
      s += term;
    }
  return s;
}

// g^{jk} f_{jk i…}
template <class T>
Components<T> trace_point(int order, const Components<T>& f, const Mat2<T>& ginv) {
  if (order < 2) throw std::invalid_argument("trace needs order >= 2");
  Components<T> out = zero_components<T>();
  for (int q = 0; q <= order - 2; ++q)
    out[q] = ginv[0][0] * f[q] + (ginv[0][1] + ginv[1][0]) * f[q + 1] + ginv[1][1] * f[q + 2];
  return out;
}

// g^{j1k1}⋯g^{jmkm} a_{j…} b_{k…} for symmetric a, b.
template <class T>
T metric_inner(int order, const Components<T>& a, const Components<T>& b, const Mat2<T>& ginv) {
  T s(0.0);
  const int n = 1 << order;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      T w = a[std::popcount(static_cast<unsigned>(i))] * b[std::popcount(static_cast<unsigned>(j))];
      for (int slot = 0; slot < order; ++slot) w *= ginv[(i >> slot) & 1][(j >> slot) & 1];
      s += w;
    }
  return s;
}

// Gram matrix P with metric_inner(a, b) = Σ_{q,r} a_q P_{qr} b_r.
std::array<std::array<double, kMaxOrder + 1>, kMaxOrder + 1> inner_matrix(int order, const Mat2<double>& ginv);

}  // namespace xrt::tensor
