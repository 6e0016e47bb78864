#include "xrt/core/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace xrt::fft {

namespace {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// Plans are made once per size on scratch buffers and executed on caller
// arrays through the new-array interface.
const Plans& plans_for(int n) {
  static std::mutex mu;
  static std::map<int, Plans> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> real(n);
  std::vector<std::complex<double>> cplx(n / 2 + 1);
  auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
  Plans p;
  p.r2c = fftw_plan_dft_r2c_1d(n, real.data(), c, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.c2r = fftw_plan_dft_c2r_1d(n, c, real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_DESTROY_INPUT);
  return cache.emplace(n, p).first->second;
}

void check_size(std::size_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("fiber sample count must be even and >= 2");
}

}  // namespace

void forward(std::span<const double> samples, std::span<std::complex<double>> coeffs) {
  const int n = static_cast<int>(samples.size());
  check_size(samples.size());
  if (coeffs.size() != samples.size() / 2 + 1) throw std::invalid_argument("coefficient buffer has wrong size");
  std::vector<double> in(samples.begin(), samples.end());
  fftw_execute_dft_r2c(plans_for(n).r2c, in.data(), reinterpret_cast<fftw_complex*>(coeffs.data()));
  for (auto& c : coeffs) c /= static_cast<double>(n);
}

void inverse(std::span<const std::complex<double>> coeffs, std::span<double> samples) {
  const int n = static_cast<int>(samples.size());
  check_size(samples.size());
  if (coeffs.size() != samples.size() / 2 + 1) throw std::invalid_argument("coefficient buffer has wrong size");
  std::vector<std::complex<double>> in(coeffs.begin(), coeffs.end());
  fftw_execute_dft_c2r(plans_for(n).c2r, reinterpret_cast<fftw_complex*>(in.data()), samples.data());
}

void derivative(std::span<const double> samples, std::span<double> out, int order) {
  const int n = static_cast<int>(samples.size());
  std::vector<std::complex<double>> c(n / 2 + 1);
  forward(samples, c);
  for (int k = 0; k <= n / 2; ++k) c[k] *= std::pow(std::complex<double>(0.0, k), order);
  if (order % 2 == 1) c[n / 2] = 0.0;
  inverse(c, out);
}

void project_degree(std::span<const double> samples, std::span<double> out, int k) {
  const int n = static_cast<int>(samples.size());
  std::vector<std::complex<double>> c(n / 2 + 1);
  forward(samples, c);
  for (int j = 0; j <= n / 2; ++j)
    if (j != k) c[j] = 0.0;
  inverse(c, out);
}

double interpolate(std::span<const double> samples, double alpha) {
  const int n = static_cast<int>(samples.size());
  std::vector<std::complex<double>> c(n / 2 + 1);
  forward(samples, c);
  double s = c[0].real();
  for (int k = 1; k < n / 2; ++k) s += 2.0 * (c[k] * std::polar(1.0, k * alpha)).real();
  s += c[n / 2].real() * std::cos(n / 2 * alpha);
  return s;
}

double tail_fraction(std::span<const double> samples) {
  const int n = static_cast<int>(samples.size());
  std::vector<std::complex<double>> c(n / 2 + 1);
  forward(samples, c);
  double total = 0.0, tail = 0.0;
  for (int k = 0; k <= n / 2; ++k) {
    const double w = (k == 0 || k == n / 2) ? 1.0 : 2.0;
    const double e = w * std::norm(c[k]);
    total += e;
    if (4 * k > n) tail += e;
  }
  return total > 0.0 ? std::sqrt(tail / total) : 0.0;
}

}  // namespace xrt::fft
