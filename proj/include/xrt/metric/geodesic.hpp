#pragma once

// Fixed-step RK4 geodesic flow on the unit disk with exit detection.

#include <vector>

#include "xrt/metric/metric.hpp"

namespace xrt::metric {

struct PhasePoint {
  Vec2<double> x;
  Vec2<double> v;
};

struct GeodesicSample {
  double t;
  Vec2<double> x;
  Vec2<double> v;
};

struct GeodesicOptions {
  double step = 1e-3;
  // 0 selects 10 x the diameter bound 2 * speed_bound().
  double max_time = 0.0;
  double drift_per_length = 1e-6;
  double exit_tol = 1e-12;
  bool keep_samples = true;
};

// Samples 0..full_steps sit at t = i*h. When the exit falls inside a step,
// two more samples follow: the midpoint and the endpoint of the partial step.
struct GeodesicPath {
  PhasePoint start;
  double step = 0.0;
  std::vector<GeodesicSample> samples;
  int full_steps = 0;
  double tail = 0.0;
  double exit_time = 0.0;
  PhasePoint exit_point;
  double max_drift = 0.0;

  // Quadrature weights aligned with samples: composite Simpson on the full
  // steps, Simpson on the partial step.
  std::vector<double> weights() const;
};

Vec2<double> geodesic_acceleration(const MetricField& metric, const Vec2<double>& x,
                                   const Vec2<double>& v);

// One classical RK4 step of size h for (x, v).
PhasePoint rk4_step(const MetricField& metric, const PhasePoint& z, double h);

GeodesicPath geodesic_integrate(const MetricField& metric, const PhasePoint& z,
                                const GeodesicOptions& options = {});

// 0 for boundary points that are outward or tangential.
double travel_time(const MetricField& metric, const PhasePoint& z, const GeodesicOptions& options = {});

// |v|_g² − 1
double speed_defect(const MetricField& metric, const PhasePoint& z);

bool on_boundary(const Vec2<double>& x, double tol = 1e-12);

// Inward g-unit normal at a boundary point.
Vec2<double> inward_normal(const MetricField& metric, const Vec2<double>& x);

// Boundary point at polar angle phi with direction rotated by theta (fiber
// angle) from the inward normal; mu = cos(theta).
PhasePoint boundary_point(const MetricField& metric, double phi, double theta);

}  // namespace xrt::metric
