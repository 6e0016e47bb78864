#include "xrt/simd/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace xrt::simd {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3_neon(const double* a, const double* b, const double* w, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)), vld1q_f64(w + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * b[i] * w[i];
  return s;
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable table{dot_neon, dot3_neon, scalar::poly_eval};
  return &table;
}

}  // namespace xrt::simd

#else

namespace xrt::simd {
const KernelTable* neon_table() { return nullptr; }
}  // namespace xrt::simd

#endif
