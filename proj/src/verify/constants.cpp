#include "xrt/verify/constants.hpp"

#include <algorithm>
#include <numbers>

#include "xrt/core/errors.hpp"

namespace xrt::verify {

Rational c_constant_exact(int n, int k) {
  const int a = 2 * k + n - 3;
  if (a <= 0) throw ConfigError("C(n,k) needs 2k + n - 3 > 0");
  return Rational(a + 2, a);
}

Rational b_constant_exact(int n, int l, int k) {
  if (l < 0) throw ConfigError("B(n,l,k) needs l >= 0");
  Rational b = 1;
  for (int p = 1; p <= l; ++p) b *= c_constant_exact(n, k + 2 * p);
  return b;
}

double c_constant(int n, int k) { return static_cast<double>(c_constant_exact(n, k)); }
double b_constant(int n, int l, int k) { return static_cast<double>(b_constant_exact(n, l, k)); }

ConstantBoundSweep constant_bound_sweep(int n_min, int n_max, int k_max, int l_max) {
  ConstantBoundSweep s;
  bool first = true;
  for (int n = n_min; n <= n_max; ++n)
    for (int k = 0; k <= k_max; ++k) {
      const int a = 2 * k + n - 3;
      if (a <= 0) continue;
      Rational b = 1;
      for (int l = 0; l <= l_max; ++l) {
        if (l > 0) b *= c_constant_exact(n, k + 2 * l);
        // B^{-2}(1 + 4l/a) ≥ 1  ⇔  a + 4l ≥ a B²
        const Rational lhs = Rational(a + 4 * l), rhs = a * b * b;
        ++s.cases;
        if (lhs < rhs) ++s.violations;
        const double ratio = static_cast<double>(lhs / rhs);
        if (first || ratio < s.min_ratio) {
          s.min_ratio = ratio;
          s.worst_n = n;
          s.worst_k = k;
          s.worst_l = l;
          first = false;
        }
      }
    }
  return s;
}

EstimateConstants estimate_constants(const metric::MetricField& metric, const transform::BoundaryFan& fan,
                                     const metric::GeodesicOptions& options) {
  EstimateConstants c;
  for (const auto& node : fan.nodes()) c.diameter = std::max(c.diameter, metric::travel_time(metric, node.z, options));
  for (int i = 0; i < fan.spec().n_boundary; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / fan.spec().n_boundary;
    c.diameter = std::max(c.diameter, metric::travel_time(metric, metric::boundary_point(metric, phi, 0.0), options));
  }
  return c;
}

}  // namespace xrt::verify
