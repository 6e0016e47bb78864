#pragma once

// Constants of the degree chain. With a = 2k + n − 3 > 0,
//   C(n, k)    = (a + 2) / a,
//   B(n, l, k) = Π_{p=1}^{l} C(n, k + 2p),
// and the bound checked exactly is B(n, l, k)^{-1} ≥ (1 + 4l/a)^{-1/2},
// i.e. B² a ≤ a + 4l.

#include <boost/multiprecision/cpp_int.hpp>

#include "xrt/metric/geodesic.hpp"
#include "xrt/transform/xray.hpp"

namespace xrt::verify {

using Rational = boost::multiprecision::cpp_rational;

Rational c_constant_exact(int n, int k);
Rational b_constant_exact(int n, int l, int k);
double c_constant(int n, int k);
double b_constant(int n, int l, int k);

struct ConstantBoundSweep {
  long cases = 0;
  long violations = 0;
  // min over cases of B^{-2}(1 + 4l/a); ≥ 1 iff every case holds.
  double min_ratio = 0.0;
  int worst_n = 0, worst_k = 0, worst_l = 0;
};

// All n in [n_min, n_max], 0 ≤ k ≤ k_max with 2k + n − 3 > 0, 0 ≤ l ≤ l_max.
ConstantBoundSweep constant_bound_sweep(int n_min, int n_max, int k_max, int l_max);

struct EstimateConstants {
  double diameter = 0.0;
  // Index-form coercivity constant for nonpositive curvature.
  double epsilon() const { return 1.0 / (diameter * diameter); }
};

// Largest travel time over the fan nodes and the normal rays θ = 0.
EstimateConstants estimate_constants(const metric::MetricField& metric, const transform::BoundaryFan& fan,
                                     const metric::GeodesicOptions& options = {});

}  // namespace xrt::verify
