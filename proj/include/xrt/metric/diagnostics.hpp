#pragma once

// Sampled simplicity diagnostics. Nothing here is a proof; the report only
// flags what the samples show.

#include <cstdint>

#include "xrt/metric/geodesic.hpp"

namespace xrt::metric {

struct DiagnosticSamples {
  int n_boundary = 24;
  int n_angle = 12;
  int n_curvature = 2000;
  int n_lipschitz = 400;
  double step = 2e-3;
  std::uint64_t seed = 1;
};

struct SimplicityReport {
  // min over sampled geodesics and times of J(t)/t for the normal Jacobi
  // field J(0) = 0, J'(0) = 1; non-positive means a conjugate point.
  double min_jacobi_ratio = 1.0;
  bool conjugate_point = false;
  double max_travel_time = 0.0;
  // sup of |τ²(z) − τ²(z')| / |z − z'| over nearby fan pairs in (φ, θ).
  double tau2_lipschitz = 0.0;
  double frac_negative = 0.0;
  double frac_zero = 0.0;
  double frac_positive = 0.0;
  int geodesics = 0;
  int curvature_samples = 0;
};

SimplicityReport simplicity_diagnostics(const MetricField& metric, const DiagnosticSamples& samples = {});

}  // namespace xrt::metric
