#pragma once

// Forward-mode dual numbers carrying three directional derivatives.
// Nesting Dual<Dual<...>> gives exact higher derivatives; level K of the
// tower (D<K>) supports K successive first-order differentiations.

#include <array>
#include <cmath>
#include <type_traits>

namespace xrt {

template <class T>
struct Dual {
  T val{};
  std::array<T, 3> d{};

  Dual() = default;
  Dual(double c) : val(c) {}  // NOLINT: constants promote implicitly
  Dual(const T& v, const std::array<T, 3>& g) : val(v), d(g) {}
  explicit Dual(const T& v)
    requires(!std::is_same_v<T, double>)
      : val(v) {}

  Dual& operator+=(const Dual& o) {
    val += o.val;
    for (int i = 0; i < 3; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    val -= o.val;
    for (int i = 0; i < 3; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < 3; ++i) d[i] = d[i] * o.val + val * o.d[i];
    val *= o.val;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    T inv = 1.0 / o.val;
    T q = val * inv;
    for (int i = 0; i < 3; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
    val = q;
    return *this;
  }
  Dual& operator+=(double c) {
    val += c;
    return *this;
  }
  Dual& operator-=(double c) {
    val -= c;
    return *this;
  }
  Dual& operator*=(double c) {
    val *= c;
    for (auto& x : d) x *= c;
    return *this;
  }
  Dual& operator/=(double c) { return *this *= (1.0 / c); }
};

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};

inline double value(double x) { return x; }
template <class T>
double value(const Dual<T>& x) {
  return value(x.val);
}

template <class T> Dual<T> operator-(const Dual<T>& a) {
  Dual<T> r;
  r.val = -a.val;
  for (int i = 0; i < 3; ++i) r.d[i] = -a.d[i];
  return r;
}
template <class T> Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <class T> Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <class T> Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <class T> Dual<T> operator/(Dual<T> a, const Dual<T>& b) { return a /= b; }
template <class T> Dual<T> operator+(Dual<T> a, double b) { return a += b; }
template <class T> Dual<T> operator-(Dual<T> a, double b) { return a -= b; }
template <class T> Dual<T> operator*(Dual<T> a, double b) { return a *= b; }
template <class T> Dual<T> operator/(Dual<T> a, double b) { return a /= b; }
template <class T> Dual<T> operator+(double a, Dual<T> b) { return b += a; }
template <class T> Dual<T> operator-(double a, const Dual<T>& b) { return -b + a; }
template <class T> Dual<T> operator*(double a, Dual<T> b) { return b *= a; }
template <class T> Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) / b; }

template <class T> bool operator<(const Dual<T>& a, double b) { return value(a) < b; }
template <class T> bool operator>(const Dual<T>& a, double b) { return value(a) > b; }
template <class T> bool operator<=(const Dual<T>& a, double b) { return value(a) <= b; }
template <class T> bool operator>=(const Dual<T>& a, double b) { return value(a) >= b; }
template <class T> bool operator<(const Dual<T>& a, const Dual<T>& b) { return value(a) < value(b); }
template <class T> bool operator>(const Dual<T>& a, const Dual<T>& b) { return value(a) > value(b); }

// Chain rule for a unary function with value f and derivative df at a.val.
template <class T>
Dual<T> chain(const Dual<T>& a, const T& f, const T& df) {
  Dual<T> r;
  r.val = f;
  for (int i = 0; i < 3; ++i) r.d[i] = df * a.d[i];
  return r;
}

template <class T> Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T s = sqrt(a.val);
  return chain(a, s, 0.5 / s);
}
template <class T> Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.val);
  return chain(a, e, e);
}
template <class T> Dual<T> log(const Dual<T>& a) {
  using std::log;
  return chain(a, T(log(a.val)), T(1.0 / a.val));
}
template <class T> Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return chain(a, T(sin(a.val)), T(cos(a.val)));
}
template <class T> Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return chain(a, T(cos(a.val)), T(-sin(a.val)));
}
template <class T> Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  using std::atan2;
  T r2 = x.val * x.val + y.val * y.val;
  Dual<T> out;
  out.val = atan2(y.val, x.val);
  for (int i = 0; i < 3; ++i) out.d[i] = (x.val * y.d[i] - y.val * x.d[i]) / r2;
  return out;
}

// Level tower: D<0> = double, D<K> = Dual<D<K-1>>.
template <int K> struct LevelType { using type = Dual<typename LevelType<K - 1>::type>; };
template <> struct LevelType<0> { using type = double; };
template <int K> using D = typename LevelType<K>::type;
inline constexpr int kMaxLevel = 3;

// Inverse of D: level_of<D<K>> == K.
template <class T> struct LevelOf { static constexpr int value = 0; };
template <class T> struct LevelOf<Dual<T>> { static constexpr int value = LevelOf<T>::value + 1; };
template <class T> inline constexpr int level_of = LevelOf<T>::value;

// Lift three level-K values to level K+1 with unit seeds.
template <int K>
std::array<D<K + 1>, 3> seed3(const D<K>& a, const D<K>& b, const D<K>& c) {
  using U = D<K + 1>;
  const D<K> zero(0.0);
  const D<K> one(1.0);
  return {U(a, {one, zero, zero}), U(b, {zero, one, zero}), U(c, {zero, zero, one})};
}

template <int K>
std::array<D<K + 1>, 2> seed2(const D<K>& a, const D<K>& b) {
  using U = D<K + 1>;
  const D<K> zero(0.0);
  const D<K> one(1.0);
  return {U(a, {one, zero, zero}), U(b, {zero, one, zero})};
}

}  // namespace xrt
