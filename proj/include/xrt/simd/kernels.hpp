#pragma once

// Hot inner loops with a scalar reference implementation and vectorized
// variants chosen once at startup from the host CPU. Vector variants may
// reassociate sums; they agree with the reference to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace xrt::simd {

enum class Isa { Scalar, Avx2, Neon };

// One term c * x1^p1 * x2^p2 of a bivariate polynomial.
struct Term {
  double coeff;
  int p1;
  int p2;
};

inline constexpr int kMaxPolyDegree = 24;

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*dot3)(const double* a, const double* b, const double* w, std::size_t n);
  void (*poly_eval)(const Term* terms, std::size_t n_terms, const double* x1, const double* x2,
                    std::size_t n, double* out);
};

// Reference kernels.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* w, std::size_t n);
void poly_eval(const Term* terms, std::size_t n_terms, const double* x1, const double* x2,
               std::size_t n, double* out);
}  // namespace scalar

const KernelTable& scalar_table();
// Null when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Selected table; honours XRT_FORCE_SCALAR=1.
const KernelTable& active();
Isa active_isa();
std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double dot3(std::span<const double> a, std::span<const double> b,
                   std::span<const double> w) {
  return active().dot3(a.data(), b.data(), w.data(), a.size());
}
inline void poly_eval(std::span<const Term> terms, std::span<const double> x1,
                      std::span<const double> x2, std::span<double> out) {
  active().poly_eval(terms.data(), terms.size(), x1.data(), x2.data(), x1.size(), out.data());
}

}  // namespace xrt::simd
