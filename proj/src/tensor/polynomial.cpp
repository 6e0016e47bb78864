#include "xrt/tensor/polynomial.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace xrt::tensor {

Polynomial::Polynomial(std::vector<Term> terms) {
  std::map<std::pair<int, int>, double> merged;
  for (const Term& t : terms) {
    if (t.p1 < 0 || t.p2 < 0) throw std::invalid_argument("polynomial exponents must be non-negative");
    if (t.p1 > simd::kMaxPolyDegree || t.p2 > simd::kMaxPolyDegree)
      throw std::invalid_argument("polynomial exponent exceeds the supported degree");
    merged[{t.p1, t.p2}] += t.coeff;
  }
  for (const auto& [p, c] : merged) {
    if (c == 0.0) continue;
    terms_.push_back({c, p.first, p.second});
    max_power_ = std::max({max_power_, p.first, p.second});
  }
}

void Polynomial::eval_batch(std::span<const double> x1, std::span<const double> x2,
                            std::span<double> out) const {
  if (terms_.empty()) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  simd::poly_eval(terms_, x1, x2, out);
}

Polynomial Polynomial::derivative(int axis) const {
  std::vector<Term> out;
  for (const Term& t : terms_) {
    int p = axis == 0 ? t.p1 : t.p2;
    if (p == 0) continue;
    out.push_back(axis == 0 ? Term{t.coeff * p, t.p1 - 1, t.p2} : Term{t.coeff * p, t.p1, t.p2 - 1});
  }
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Term> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return Polynomial(std::move(all));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o.scaled(-1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  std::vector<Term> all;
  for (const Term& a : terms_)
    for (const Term& b : o.terms_) all.push_back({a.coeff * b.coeff, a.p1 + b.p1, a.p2 + b.p2});
  return Polynomial(std::move(all));
}

Polynomial Polynomial::scaled(double c) const {
  std::vector<Term> all = terms_;
  for (Term& t : all) t.coeff *= c;
  return Polynomial(std::move(all));
}

int Polynomial::degree() const {
  int d = 0;
  for (const Term& t : terms_) d = std::max(d, t.p1 + t.p2);
  return d;
}

Polynomial random_polynomial(std::mt19937_64& rng, int degree, double scale) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<Term> terms;
  for (int total = 0; total <= degree; ++total)
    for (int p1 = total; p1 >= 0; --p1) terms.push_back({scale * coeff(rng), p1, total - p1});
  return Polynomial(std::move(terms));
}

}  // namespace xrt::tensor
