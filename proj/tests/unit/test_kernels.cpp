#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "xrt/simd/kernels.hpp"

using namespace xrt::simd;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<const KernelTable*> all_tables() {
  std::vector<const KernelTable*> t{&scalar_table()};
  if (avx2_table()) t.push_back(avx2_table());
  if (neon_table()) t.push_back(neon_table());
  return t;
}

}  // namespace

TEST_CASE("reductions agree with a long-double reference for every compiled variant") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 31u, 1000u, 4097u}) {
    auto a = random_vector(rng, n), b = random_vector(rng, n), w = random_vector(rng, n);
    long double ref2 = 0.0L, ref3 = 0.0L, mag = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      ref2 += static_cast<long double>(a[i]) * b[i];
      ref3 += static_cast<long double>(a[i]) * b[i] * w[i];
      mag += std::abs(a[i] * b[i]);
    }
    for (const KernelTable* t : all_tables()) {
      CHECK(std::abs(t->dot(a.data(), b.data(), n) - static_cast<double>(ref2)) <= 1e-14 * (1.0 + mag));
      CHECK(std::abs(t->dot3(a.data(), b.data(), w.data(), n) - static_cast<double>(ref3)) <=
            1e-14 * (1.0 + mag));
    }
  }
}

TEST_CASE("batched polynomial evaluation matches direct power evaluation") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> deg(0, 9);
  std::vector<Term> terms;
  for (int k = 0; k < 25; ++k) terms.push_back({std::uniform_real_distribution<double>(-2, 2)(rng), deg(rng), deg(rng)});
  for (std::size_t n : {1u, 4u, 5u, 13u, 257u}) {
    auto x1 = random_vector(rng, n), x2 = random_vector(rng, n);
    std::vector<double> ref(n);
    for (std::size_t i = 0; i < n; ++i)
      for (const Term& t : terms) ref[i] += t.coeff * std::pow(x1[i], t.p1) * std::pow(x2[i], t.p2);
    for (const KernelTable* t : all_tables()) {
      std::vector<double> out(n);
      t->poly_eval(terms.data(), terms.size(), x1.data(), x2.data(), n, out.data());
      for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(ref[i]).epsilon(1e-13));
    }
  }
}

TEST_CASE("dispatch selects a compiled variant") {
  const Isa isa = active_isa();
  if (isa == Isa::Avx2) CHECK(avx2_table() != nullptr);
  CHECK_FALSE(isa_name(isa).empty());
}
