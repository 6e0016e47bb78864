#pragma once

#include <random>
#include <span>
#include <vector>

#include "xrt/core/autodiff.hpp"
#include "xrt/simd/kernels.hpp"

namespace xrt::tensor {

using Term = simd::Term;

// Bivariate polynomial in (x1, x2); like terms are merged on construction.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Term> terms);

  static Polynomial constant(double c) { return Polynomial({{c, 0, 0}}); }
  static Polynomial monomial(double c, int p1, int p2) { return Polynomial({{c, p1, p2}}); }
  // 1 − x1² − x2², vanishing on the unit circle.
  static Polynomial boundary_factor() { return Polynomial({{1.0, 0, 0}, {-1.0, 2, 0}, {-1.0, 0, 2}}); }

  template <class T>
  T operator()(const T& x1, const T& x2) const {
    T s(0.0);
    if (terms_.empty()) return s;
    T pw1[simd::kMaxPolyDegree + 1];
    T pw2[simd::kMaxPolyDegree + 1];
    pw1[0] = T(1.0);
    pw2[0] = T(1.0);
    for (int k = 1; k <= max_power_; ++k) {
      pw1[k] = pw1[k - 1] * x1;
      pw2[k] = pw2[k - 1] * x2;
    }
    for (const Term& t : terms_) s += t.coeff * (pw1[t.p1] * pw2[t.p2]);
    return s;
  }

  void eval_batch(std::span<const double> x1, std::span<const double> x2, std::span<double> out) const;

  Polynomial derivative(int axis) const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(double c) const;

  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
  int max_power_ = 0;
};

// Random coefficients in [-1, 1] on all monomials of total degree ≤ degree.
Polynomial random_polynomial(std::mt19937_64& rng, int degree, double scale = 1.0);

}  // namespace xrt::tensor
