#include "xrt/boundary/potential.hpp"

#include <algorithm>

namespace xrt::boundary {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec2<double> on_circle(double phi) { return {std::cos(phi), std::sin(phi)}; }

}  // namespace

BoundaryChart BoundaryChart::tangent(double center, double half_width) {
  if (!(half_width > 0.0 && half_width < 0.5 * std::numbers::pi))
    throw ConfigError("tangent chart half-width must lie in (0, pi/2)");
  return BoundaryChart(Kind::tangent, center, half_width);
}

double BoundaryChart::distance(double theta) const {
  double d = std::remainder(theta - center_, kTwoPi);
  return std::abs(d);
}

Components<double> to_chart(int order, const Components<double>& cart, const BoundaryChart& chart,
                            const Vec2<double>& x) {
  ChartFrame<double> fr = chart.frame(x);
  // ∂x/∂y at x itself: invert ∂y/∂x.
  return transform_components(order, cart, inverse(fr.dy_dx));
}

SymmetricTensorField local_boundary_potential(const SymmetricTensorField& f, const BoundaryChart& chart) {
  const int m = f.order();
  if (m < 1) throw OrderTooLow("boundary potential needs a field of order >= 1");
  return SymmetricTensorField::from_function<2>(m - 1, [f, chart, m](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    constexpr int K = level_of<T>;
    ChartFrame<T> fr = chart.frame(x);
    auto fb = transform_components(m, f.template at<K>(fr.boundary), fr.dx_dy0);
    Components<T> chart_p = tensor::zero_components<T>();
    for (int q = 0; q <= m - 1; ++q) chart_p[q] = (static_cast<double>(m) / (q + 1)) * fr.xn * fb[q + 1];
    return transform_components(m - 1, chart_p, fr.dy_dx);
  });
}

PartitionOfUnity PartitionOfUnity::polar() {
  PartitionOfUnity p;
  p.charts.push_back(BoundaryChart::polar());
  return p;
}

PartitionOfUnity PartitionOfUnity::angular(int n, double overlap) {
  if (n < 3) throw ConfigError("angular partition needs at least 3 tangent charts");
  const double w = std::numbers::pi / n;
  if (!(overlap > 0.0 && w + overlap < 0.5 * std::numbers::pi && overlap < w))
    throw ConfigError("angular partition overlap out of range");
  PartitionOfUnity p;
  p.overlap = overlap;
  for (int i = 0; i < n; ++i) p.charts.push_back(BoundaryChart::tangent(kTwoPi * i / n, w + overlap));
  return p;
}

double PartitionOfUnity::psi(int i, const Vec2<double>& x) const {
  const double chi = cutoff(x);
  if (i == 0) return 1.0 - chi;
  return chi * angular_weight(i - 1, x);
}

SymmetricTensorField glue_boundary_potential(const SymmetricTensorField& f, const PartitionOfUnity& partition) {
  if (partition.charts.empty()) throw CoverGap("partition has no boundary charts");
  for (int k = 0; k < 720; ++k) {
    const Vec2<double> b = on_circle(kTwoPi * (k + 0.5) / 720);
    double s = 0.0;
    for (std::size_t i = 0; i < partition.charts.size(); ++i) s += partition.angular_weight(static_cast<int>(i), b);
    if (std::abs(s - 1.0) > 1e-12)
      throw CoverGap("chart weights sum to " + std::to_string(s) + " at boundary angle " +
                     std::to_string(kTwoPi * (k + 0.5) / 720));
  }
  std::vector<SymmetricTensorField> locals;
  for (const auto& c : partition.charts) locals.push_back(local_boundary_potential(f, c));
  const int order = f.order() - 1;
  return SymmetricTensorField::from_function<2>(order, [locals, partition, order](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    constexpr int K = level_of<T>;
    Components<T> out = tensor::zero_components<T>();
    T chi = partition.cutoff(x);
    if (value(chi) == 0.0) return out;
    for (std::size_t i = 0; i < locals.size(); ++i) {
      T w = chi * partition.angular_weight(static_cast<int>(i), x);
      if (value(w) == 0.0) continue;
      auto pi = locals[i].template at<K>(x);
      for (int q = 0; q <= order; ++q) out[q] += w * pi[q];
    }
    return out;
  });
}

TangentialReport tangential_vanishing_check(const SymmetricTensorField& f, const MetricField& metric, int n_samples) {
  TangentialReport r;
  for (int k = 0; k < n_samples; ++k) {
    const double phi = kTwoPi * k / n_samples;
    Vec2<double> x = on_circle(phi), t{-x[1], x[0]};
    const double len = std::sqrt(inner(metric.g(x), t, t));
    const double val = std::abs(f.lambda(x, {t[0] / len, t[1] / len}));
    if (val > r.max_abs) {
      r.max_abs = val;
      r.worst_phi = phi;
    }
  }
  return r;
}

Components<double> covariant_derivative_along(const SymmetricTensorField& p, const MetricField& metric,
                                              const Vec2<double>& x, const Vec2<double>& w) {
  const int k = p.order();
  auto s = seed2<0>(x[0], x[1]);
  auto c = p.at<1>({s[0], s[1]});
  Components<double> out = tensor::zero_components<double>();
  for (int q = 0; q <= k; ++q) out[q] = w[0] * c[q].d[0] + w[1] * c[q].d[1];
  if (k == 0) return out;
  // −Σ_s Γ^a_{w i_s} p_{…a…}, evaluated on the representative index with
  // slots 0..q−1 equal to 2.
  auto gam = metric.christoffel(x);
  Components<double> pv = tensor::zero_components<double>();
  for (int q = 0; q <= k; ++q) pv[q] = c[q].val;
  for (int q = 0; q <= k; ++q)
    for (int slot = 0; slot < k; ++slot) {
      const int i = slot < q ? 1 : 0;
      const int twos_elsewhere = q - (slot < q ? 1 : 0);
      for (int a = 0; a < 2; ++a) {
        const double g = gam[a][0][i] * w[0] + gam[a][1][i] * w[1];
        out[q] -= g * pv[twos_elsewhere + a];
      }
    }
  return out;
}

BoundaryIdentityReport boundary_identities(const SymmetricTensorField& f, const SymmetricTensorField& p,
                                           const MetricField& metric, const BoundaryChart& chart, int n_samples) {
  const int m = f.order();
  if (p.order() != m - 1) throw OrderMismatch("boundary potential must have order m - 1");
  auto sp = tensor::sym_cov_derivative(p, metric);
  BoundaryIdentityReport r;
  for (int k = 0; k < n_samples; ++k) {
    const double phi = chart.center() + chart.half_width() * (2.0 * (k + 0.5) / n_samples - 1.0);
    const Vec2<double> x = on_circle(phi);
    ChartFrame<double> fr = chart.frame(x);
    auto pc = p.at(x);
    for (int q = 0; q < m; ++q) r.max_boundary_value = std::max(r.max_boundary_value, std::abs(pc[q]));

    auto fc = to_chart(m, f.at(x), chart, x);
    auto spc = to_chart(m, sp.at(x), chart, x);
    for (int q = 0; q <= m; ++q) r.max_reconstruction = std::max(r.max_reconstruction, std::abs(spc[q] - fc[q]));

    // Chart coordinate vectors ∂_x̂ and ∂_n at x.
    Mat2<double> dx = inverse(fr.dy_dx);
    auto dn = to_chart(m - 1, covariant_derivative_along(p, metric, x, {dx[0][1], dx[1][1]}), chart, x);
    auto dt = to_chart(m - 1, covariant_derivative_along(p, metric, x, {dx[0][0], dx[1][0]}), chart, x);
    for (int q = 0; q <= m - 1; ++q) {
      r.max_normal_identity =
          std::max(r.max_normal_identity, std::abs(dn[q] - static_cast<double>(m) / (q + 1) * fc[q + 1]));
      r.max_tangential_derivative = std::max(r.max_tangential_derivative, std::abs(dt[q]));
    }
  }
  return r;
}

}  // namespace xrt::boundary
