#include "xrt/simd/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

#include <algorithm>

#define XRT_AVX2 __attribute__((target("avx2,fma")))

namespace xrt::simd {
namespace {

XRT_AVX2 double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sw = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sw));
}

XRT_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

XRT_AVX2 double dot3_avx2(const double* a, const double* b, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(ab, _mm256_loadu_pd(w + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i] * w[i];
  return s;
}

XRT_AVX2 void poly_eval_avx2(const Term* terms, std::size_t n_terms, const double* x1,
                             const double* x2, std::size_t n, double* out) {
  int deg = 0;
  for (std::size_t t = 0; t < n_terms; ++t) deg = std::max({deg, terms[t].p1, terms[t].p2});
  __m256d pw1[kMaxPolyDegree + 1];
  __m256d pw2[kMaxPolyDegree + 1];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(x1 + i);
    const __m256d b = _mm256_loadu_pd(x2 + i);
    pw1[0] = pw2[0] = _mm256_set1_pd(1.0);
    for (int k = 1; k <= deg; ++k) {
      pw1[k] = _mm256_mul_pd(pw1[k - 1], a);
      pw2[k] = _mm256_mul_pd(pw2[k - 1], b);
    }
    __m256d s = _mm256_setzero_pd();
    for (std::size_t t = 0; t < n_terms; ++t) {
      __m256d m = _mm256_mul_pd(_mm256_set1_pd(terms[t].coeff), pw1[terms[t].p1]);
      s = _mm256_fmadd_pd(m, pw2[terms[t].p2], s);
    }
    _mm256_storeu_pd(out + i, s);
  }
  if (i < n) scalar::poly_eval(terms, n_terms, x1 + i, x2 + i, n - i, out + i);
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{dot_avx2, dot3_avx2, poly_eval_avx2};
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? &table : nullptr;
}

}  // namespace xrt::simd

#else

namespace xrt::simd {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace xrt::simd

#endif
