#pragma once

// Real FFT over the fiber angle: samples u_j = u(2πj/n), coefficients
// û_k = (1/n) Σ_j u_j e^{−ikα_j} for k = 0..n/2.

#include <complex>
#include <span>

namespace xrt::fft {

void forward(std::span<const double> samples, std::span<std::complex<double>> coeffs);
void inverse(std::span<const std::complex<double>> coeffs, std::span<double> samples);

// d^order/dα^order by multiplication with (ik)^order; the Nyquist mode is
// dropped for odd orders.
void derivative(std::span<const double> samples, std::span<double> out, int order = 1);

// Keep only the ±k modes.
void project_degree(std::span<const double> samples, std::span<double> out, int k);

// Trigonometric interpolation of the samples at angle alpha.
double interpolate(std::span<const double> samples, double alpha);

// Relative L² weight of the modes with |k| > n/4.
double tail_fraction(std::span<const double> samples);

}  // namespace xrt::fft
