#include "xrt/core/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace xrt {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  if (n == 1) {
    rule.nodes[0] = mid;
    rule.weights[0] = 2.0 * half;
    return rule;
  }
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

std::vector<double> lagrange_diff_matrix(const std::vector<double>& nodes) {
  const std::size_t n = nodes.size();
  std::vector<double> bw(n, 1.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) bw[j] /= (nodes[j] - nodes[k]);
  std::vector<double> dm(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double v = (bw[j] / bw[i]) / (nodes[i] - nodes[j]);
      dm[i * n + j] = v;
      diag -= v;
    }
    dm[i * n + i] = diag;
  }
  return dm;
}

std::vector<double> periodic_diff_matrix(int n) {
  if (n % 2 != 0) throw std::invalid_argument("periodic_diff_matrix: n must be even");
  const double h = 2.0 * std::numbers::pi / n;
  std::vector<double> dm(static_cast<std::size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      if (j == l) continue;
      int d = j - l;
      double sign = (d % 2 == 0) ? 1.0 : -1.0;
      dm[static_cast<std::size_t>(j) * n + l] = 0.5 * sign / std::tan(0.5 * d * h);
    }
  return dm;
}

std::vector<double> simpson_weights(int n, double h) {
  std::vector<double> w(n + 1, 0.0);
  if (n == 0) return w;
  if (n == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  int simpson_end = (n % 2 == 0) ? n : n - 3;
  for (int i = 0; i < simpson_end; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (simpson_end != n) {
    const double c = 3.0 * h / 8.0;
    w[n - 3] += c;
    w[n - 2] += 3.0 * c;
    w[n - 1] += 3.0 * c;
    w[n] += c;
  }
  return w;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace xrt
