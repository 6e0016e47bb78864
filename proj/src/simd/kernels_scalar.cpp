#include <algorithm>

#include "xrt/simd/kernels.hpp"

namespace xrt::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3(const double* a, const double* b, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * w[i];
  return s;
}

void poly_eval(const Term* terms, std::size_t n_terms, const double* x1, const double* x2,
               std::size_t n, double* out) {
  int deg = 0;
  for (std::size_t t = 0; t < n_terms; ++t) deg = std::max({deg, terms[t].p1, terms[t].p2});
  double pw1[kMaxPolyDegree + 1];
  double pw2[kMaxPolyDegree + 1];
  for (std::size_t i = 0; i < n; ++i) {
    pw1[0] = pw2[0] = 1.0;
    for (int k = 1; k <= deg; ++k) {
      pw1[k] = pw1[k - 1] * x1[i];
      pw2[k] = pw2[k - 1] * x2[i];
    }
    double s = 0.0;
    for (std::size_t t = 0; t < n_terms; ++t) s += terms[t].coeff * pw1[terms[t].p1] * pw2[terms[t].p2];
    out[i] = s;
  }
}

}  // namespace xrt::simd::scalar
