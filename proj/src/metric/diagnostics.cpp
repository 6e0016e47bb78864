#include "xrt/metric/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace xrt::metric {

namespace {

struct JacobiState {
  PhasePoint z;
  double j;
  double dj;
};

JacobiState jacobi_rhs(const MetricField& metric, const JacobiState& s) {
  double k = gauss_curvature(metric, s.z.x).value;
  return {{s.z.v, geodesic_acceleration(metric, s.z.x, s.z.v)}, s.dj, -k * s.j};
}

JacobiState jacobi_axpy(const JacobiState& a, double h, const JacobiState& b) {
  return {{{a.z.x[0] + h * b.z.x[0], a.z.x[1] + h * b.z.x[1]},
           {a.z.v[0] + h * b.z.v[0], a.z.v[1] + h * b.z.v[1]}},
          a.j + h * b.j,
          a.dj + h * b.dj};
}

// Min of J(t)/t along the geodesic until the disk is left.
double jacobi_ratio(const MetricField& metric, const PhasePoint& z, double h, double cap) {
  JacobiState s{z, 0.0, 1.0};
  double best = 1.0;
  for (double t = 0.0; t < cap;) {
    JacobiState k1 = jacobi_rhs(metric, s);
    JacobiState k2 = jacobi_rhs(metric, jacobi_axpy(s, 0.5 * h, k1));
    JacobiState k3 = jacobi_rhs(metric, jacobi_axpy(s, 0.5 * h, k2));
    JacobiState k4 = jacobi_rhs(metric, jacobi_axpy(s, h, k3));
    JacobiState n = s;
    n = jacobi_axpy(n, h / 6.0, k1);
    n = jacobi_axpy(n, h / 3.0, k2);
    n = jacobi_axpy(n, h / 3.0, k3);
    n = jacobi_axpy(n, h / 6.0, k4);
    if (dot(n.z.x, n.z.x) > 1.0) break;
    s = n;
    t += h;
    best = std::min(best, s.j / t);
  }
  return best;
}

}  // namespace

SimplicityReport simplicity_diagnostics(const MetricField& metric, const DiagnosticSamples& samples) {
  SimplicityReport rep;
  GeodesicOptions opt;
  opt.step = samples.step;
  opt.keep_samples = false;
  const double cap = 20.0 * metric.speed_bound();
  const double theta_max = 0.5 * std::numbers::pi - 1e-3;

  for (int i = 0; i < samples.n_boundary; ++i) {
    double phi = 2.0 * std::numbers::pi * i / samples.n_boundary;
    for (int j = 0; j < samples.n_angle; ++j) {
      double theta = -theta_max + 2.0 * theta_max * (j + 0.5) / samples.n_angle;
      PhasePoint z = boundary_point(metric, phi, theta);
      rep.max_travel_time = std::max(rep.max_travel_time, travel_time(metric, z, opt));
      rep.min_jacobi_ratio = std::min(rep.min_jacobi_ratio, jacobi_ratio(metric, z, samples.step, cap));
      ++rep.geodesics;
    }
  }
  rep.conjugate_point = rep.min_jacobi_ratio <= 0.0;

  std::mt19937_64 rng(samples.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double delta = 1e-3;
  for (int s = 0; s < samples.n_lipschitz; ++s) {
    double phi = 2.0 * std::numbers::pi * uni(rng);
    double theta = (2.0 * uni(rng) - 1.0) * (theta_max - 2.0 * delta);
    double dir = 2.0 * std::numbers::pi * uni(rng);
    double dphi = delta * std::cos(dir), dtheta = delta * std::sin(dir);
    double t0 = travel_time(metric, boundary_point(metric, phi, theta), opt);
    double t1 = travel_time(metric, boundary_point(metric, phi + dphi, theta + dtheta), opt);
    rep.tau2_lipschitz = std::max(rep.tau2_lipschitz, std::abs(t1 * t1 - t0 * t0) / delta);
  }

  int neg = 0, zero = 0, pos = 0;
  for (int s = 0; s < samples.n_curvature; ++s) {
    double r = std::sqrt(uni(rng)), a = 2.0 * std::numbers::pi * uni(rng);
    double k = gauss_curvature(metric, {r * std::cos(a), r * std::sin(a)}).value;
    if (std::abs(k) <= 1e-12)
      ++zero;
    else if (k < 0.0)
      ++neg;
    else
      ++pos;
  }
  rep.curvature_samples = samples.n_curvature;
  const double n = std::max(1, samples.n_curvature);
  rep.frac_negative = neg / n;
  rep.frac_zero = zero / n;
  rep.frac_positive = pos / n;
  return rep;
}

}  // namespace xrt::metric
