#include "xrt/metric/geodesic.hpp"

#include <cmath>
#include <sstream>

#include "xrt/core/quadrature.hpp"

namespace xrt::metric {

Vec2<double> geodesic_acceleration(const MetricField& metric, const Vec2<double>& x,
                                   const Vec2<double>& v) {
  Vec2<double> a = contract(metric.christoffel(x), v, v);
  return {-a[0], -a[1]};
}

PhasePoint rk4_step(const MetricField& metric, const PhasePoint& z, double h) {
  auto axpy = [](const Vec2<double>& a, double s, const Vec2<double>& b) {
    return Vec2<double>{a[0] + s * b[0], a[1] + s * b[1]};
  };
  const Vec2<double> k1x = z.v;
  const Vec2<double> k1v = geodesic_acceleration(metric, z.x, z.v);
  const Vec2<double> x2 = axpy(z.x, 0.5 * h, k1x), v2 = axpy(z.v, 0.5 * h, k1v);
  const Vec2<double> k2v = geodesic_acceleration(metric, x2, v2);
  const Vec2<double> x3 = axpy(z.x, 0.5 * h, v2), v3 = axpy(z.v, 0.5 * h, k2v);
  const Vec2<double> k3v = geodesic_acceleration(metric, x3, v3);
  const Vec2<double> x4 = axpy(z.x, h, v3), v4 = axpy(z.v, h, k3v);
  const Vec2<double> k4v = geodesic_acceleration(metric, x4, v4);
  PhasePoint out;
  for (int i = 0; i < 2; ++i) {
    out.x[i] = z.x[i] + h / 6.0 * (k1x[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
    out.v[i] = z.v[i] + h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
  }
  return out;
}

double speed_defect(const MetricField& metric, const PhasePoint& z) {
  return inner(metric.g(z.x), z.v, z.v) - 1.0;
}

bool on_boundary(const Vec2<double>& x, double tol) {
  return std::abs(dot(x, x) - 1.0) <= tol;
}

std::vector<double> GeodesicPath::weights() const {
  std::vector<double> w = simpson_weights(full_steps, step);
  w.resize(samples.size(), 0.0);
  if (tail > 0.0) {
    const std::size_t n = static_cast<std::size_t>(full_steps);
    w[n] += tail / 6.0;
    w[n + 1] += 4.0 * tail / 6.0;
    w[n + 2] += tail / 6.0;
  }
  return w;
}

GeodesicPath geodesic_integrate(const MetricField& metric, const PhasePoint& z,
                                const GeodesicOptions& options) {
  if (!(options.step > 0.0)) throw UsageError("geodesic step must be positive");
  const double h = options.step;
  const double cap = options.max_time > 0.0 ? options.max_time : 20.0 * metric.speed_bound();

  GeodesicPath path;
  path.start = z;
  path.step = h;
  const double r2 = dot(z.x, z.x);
  const bool starts_on_boundary = r2 >= 1.0 - 1e-12;
  if (r2 > 1.0 + 1e-9) throw UsageError("geodesic start lies outside the closed disk");
  auto push = [&](double t, const PhasePoint& p) {
    if (options.keep_samples || path.samples.empty()) path.samples.push_back({t, p.x, p.v});
  };
  push(0.0, z);
  path.max_drift = std::abs(speed_defect(metric, z));

  if (starts_on_boundary && dot(z.x, z.v) >= 0.0) {
    path.exit_point = z;
    return path;
  }

  PhasePoint y = z;
  double t = 0.0;
  int n = 0;
  while (true) {
    PhasePoint next = rk4_step(metric, y, h);
    if (dot(next.x, next.x) >= 1.0) {
      // Leaves the disk within this step: bisect the partial step length.
      const bool scaled = starts_on_boundary && n == 0;
      auto excess = [&](double s) {
        PhasePoint p = rk4_step(metric, y, s);
        double f = dot(p.x, p.x) - 1.0;
        return scaled ? f / s : f;
      };
      double lo = 0.0, hi = h;
      while (hi - lo > options.exit_tol) {
        double mid = 0.5 * (lo + hi);
        if (excess(mid) < 0.0)
          lo = mid;
        else
          hi = mid;
      }
      const double s = 0.5 * (lo + hi);
      path.full_steps = n;
      path.tail = s;
      if (options.keep_samples) {
        PhasePoint mid = rk4_step(metric, y, 0.5 * s);
        path.samples.push_back({t + 0.5 * s, mid.x, mid.v});
      }
      PhasePoint end = rk4_step(metric, y, s);
      path.max_drift = std::max(path.max_drift, std::abs(speed_defect(metric, end)));
      double r = std::sqrt(dot(end.x, end.x));
      end.x = {end.x[0] / r, end.x[1] / r};
      double speed = std::sqrt(inner(metric.g(end.x), end.v, end.v));
      end.v = {end.v[0] / speed, end.v[1] / speed};
      t += s;
      path.samples.push_back({t, end.x, end.v});
      path.exit_time = t;
      path.exit_point = end;
      break;
    }
    y = next;
    t += h;
    ++n;
    path.max_drift = std::max(path.max_drift, std::abs(speed_defect(metric, y)));
    push(t, y);
    if (t > cap) {
      std::ostringstream os;
      os << "geodesic did not exit before t = " << cap << " (metric " << metric.id() << ")";
      throw NoExit(os.str());
    }
  }
  if (path.max_drift > options.drift_per_length * std::max(1.0, path.exit_time)) {
    std::ostringstream os;
    os << "unit-speed drift " << path.max_drift << " over length " << path.exit_time
       << " exceeds tolerance at step " << h;
    throw StepTooLarge(os.str());
  }
  if (!options.keep_samples) path.full_steps = 0;
  return path;
}

double travel_time(const MetricField& metric, const PhasePoint& z, const GeodesicOptions& options) {
  GeodesicOptions o = options;
  o.keep_samples = false;
  return geodesic_integrate(metric, z, o).exit_time;
}

Vec2<double> inward_normal(const MetricField& metric, const Vec2<double>& x) {
  if (!on_boundary(x, 1e-9)) throw NotOnBoundary("point is not on the unit circle");
  Mat2<double> g = metric.g(x);
  Vec2<double> n = mul(inverse(g), Vec2<double>{-x[0], -x[1]});
  double len = std::sqrt(inner(g, n, n));
  return {n[0] / len, n[1] / len};
}

PhasePoint boundary_point(const MetricField& metric, double phi, double theta) {
  Vec2<double> x{std::cos(phi), std::sin(phi)};
  Mat2<double> g = metric.g(x);
  double alpha = fiber_angle(g, inward_normal(metric, x)) + theta;
  return {x, fiber_vector(g, alpha)};
}

}  // namespace xrt::metric
