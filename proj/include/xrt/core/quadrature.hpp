#pragma once

#include <span>
#include <vector>

namespace xrt {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss–Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Barycentric differentiation matrix (row-major n x n) for polynomial
// interpolation through the given distinct nodes.
std::vector<double> lagrange_diff_matrix(const std::vector<double>& nodes);

// Spectral differentiation matrix (row-major) for n equispaced samples of a
// 2π-periodic function, n even. Independent of the grid offset.
std::vector<double> periodic_diff_matrix(int n);

// Composite Simpson weights for n intervals of width h (n+1 samples). Odd n
// closes with the 3/8 rule; n = 1 falls back to the trapezoid.
std::vector<double> simpson_weights(int n, double h);

// Recursive pairwise sum in index order; deterministic for a fixed length.
double pairwise_sum(std::span<const double> values);

}  // namespace xrt
