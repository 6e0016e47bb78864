#pragma once

// Boundary potential: for f of order m ≥ 1, a field p of order m − 1 with
// p = 0 on |x| = 1 and σ∇p = f there whenever f vanishes on tangential
// directions at the boundary.
//
// Charts use y = (x̂, xⁿ) with xⁿ = 1 − |x| and x̂ a function of the polar
// angle θ only. In chart components, with l tangential and m − 1 − l normal
// indices,
//   p_{x̂…x̂ n…n}(x̂, xⁿ) = m/(m − l) · xⁿ · f_{x̂…x̂ n…n}(x̂, 0).
// Symmetric chart components are indexed by the number q of normal slots.

#include <cmath>
#include <numbers>
#include <vector>

#include "xrt/metric/metric.hpp"
#include "xrt/tensor/field.hpp"

namespace xrt::boundary {

using metric::MetricField;
using tensor::Components;
using tensor::SymmetricTensorField;

// out_{a…} = Σ_i in_{i…} Π_s a[i_s][a_s]
template <class T>
Components<T> transform_components(int order, const Components<T>& in, const Mat2<T>& a) {
  Components<T> out = tensor::zero_components<T>();
  for (int q = 0; q <= order; ++q) {
    // Representative target index: slots 0..q−1 hold index 2.
    for (int idx = 0; idx < (1 << order); ++idx) {
      T term = in[std::popcount(static_cast<unsigned>(idx))];
      for (int s = 0; s < order; ++s) term *= a[(idx >> s) & 1][s < q ? 1 : 0];
      out[q] += term;
    }
  }
  return out;
}

// Quintic smoothstep on [0, 1]: S(1 − t) = 1 − S(t).
template <class T>
T smoothstep(const T& t) {
  if (t <= 0.0) return T(0.0);
  if (t >= 1.0) return T(1.0);
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

template <class T>
struct ChartFrame {
  T xn;              // 1 − |x|
  Vec2<T> boundary;  // x / |x|
  Mat2<T> dy_dx;     // [a][i] = ∂y^a/∂x^i at x
  Mat2<T> dx_dy0;    // [i][a] = ∂x^i/∂y^a at (x̂, 0)
};

class BoundaryChart {
 public:
  enum class Kind { polar, tangent };

  // Polar chart x̂ = θ covering the whole boundary.
  static BoundaryChart polar() { return BoundaryChart(Kind::polar, 0.0, std::numbers::pi); }
  // x̂ = sin(θ − center), valid for |θ − center| < half_width < π/2.
  static BoundaryChart tangent(double center, double half_width);

  Kind kind() const { return kind_; }
  double center() const { return center_; }
  double half_width() const { return half_width_; }
  // Angular distance to the center in [0, π].
  double distance(double theta) const;
  bool contains(double theta) const { return distance(theta) < half_width_; }

  template <class T>
  ChartFrame<T> frame(const Vec2<T>& x) const {
    using std::cos;
    using std::sin;
    using std::sqrt;
    using std::atan2;
    T r2 = x[0] * x[0] + x[1] * x[1];
    T r = sqrt(r2);
    ChartFrame<T> f;
    f.xn = 1.0 - r;
    f.boundary = {x[0] / r, x[1] / r};
    // s = dx̂/dθ
    T s(1.0);
    if (kind_ == Kind::tangent) s = cos(atan2(x[1], x[0]) - center_);
    f.dy_dx[0] = {-x[1] / r2 * s, x[0] / r2 * s};
    f.dy_dx[1] = {-f.boundary[0], -f.boundary[1]};
    f.dx_dy0[0] = {-f.boundary[1] / s, -f.boundary[0]};
    f.dx_dy0[1] = {f.boundary[0] / s, -f.boundary[1]};
    return f;
  }

 private:
  BoundaryChart(Kind kind, double center, double half_width) : kind_(kind), center_(center), half_width_(half_width) {}
  Kind kind_;
  double center_;
  double half_width_;
};

// Cartesian components at x expressed in chart components.
Components<double> to_chart(int order, const Components<double>& cart, const BoundaryChart& chart,
                            const Vec2<double>& x);

// Chart-local potential (no cutoff); defined for x ≠ 0 inside the chart.
SymmetricTensorField local_boundary_potential(const SymmetricTensorField& f, const BoundaryChart& chart);

// ψ₀ = 1 − χ(|x|) carries the zero interior potential; chart i carries
// ψ_i = χ(|x|) η_i(θ) with η_i = S((w − d_i(θ)) / 2δ), w the chart
// half-width (including the overlap δ). χ rises from 0 at inner_radius to 1 at
// outer_radius.
struct PartitionOfUnity {
  std::vector<BoundaryChart> charts;
  double overlap = 0.0;
  double inner_radius = 0.3;
  double outer_radius = 0.6;

  // Single polar chart.
  static PartitionOfUnity polar();
  // n tangent charts centred at 2πi/n with half-width π/n + overlap.
  static PartitionOfUnity angular(int n, double overlap);

  template <class T>
  T cutoff(const Vec2<T>& x) const {
    using std::sqrt;
    return smoothstep((sqrt(x[0] * x[0] + x[1] * x[1]) - inner_radius) / (outer_radius - inner_radius));
  }
  template <class T>
  T angular_weight(int i, const Vec2<T>& x) const {
    using std::atan2;
    if (charts[i].kind() == BoundaryChart::Kind::polar) return T(1.0);
    T theta = atan2(x[1], x[0]);
    // Angular distance with the derivative of |θ − c| mod 2π.
    T d = theta - charts[i].center();
    const double two_pi = 2.0 * std::numbers::pi;
    while (d > std::numbers::pi) d -= two_pi;
    while (d < -std::numbers::pi) d += two_pi;
    if (d < 0.0) d = -d;
    return smoothstep((charts[i].half_width() - d) / (2.0 * overlap));
  }
  // ψ_i for i = 0..charts.size(); index 0 is the interior bump.
  double psi(int i, const Vec2<double>& x) const;
};

// Glued p = Σ_i ψ_i p_i. CoverGap when the chart weights do not sum to 1 on
// the boundary circle.
SymmetricTensorField glue_boundary_potential(const SymmetricTensorField& f, const PartitionOfUnity& partition);

struct TangentialReport {
  double max_abs = 0.0;  // max |λf| over unit tangential boundary directions
  double worst_phi = 0.0;
};
TangentialReport tangential_vanishing_check(const SymmetricTensorField& f, const MetricField& metric,
                                            int n_samples = 256);

// ∇_w p at x, symmetric of the same order as p.
Components<double> covariant_derivative_along(const SymmetricTensorField& p, const MetricField& metric,
                                              const Vec2<double>& x, const Vec2<double>& w);

struct BoundaryIdentityReport {
  double max_boundary_value = 0.0;     // max |p| on the boundary
  double max_reconstruction = 0.0;     // max |σ∇p − f| on the boundary, chart components
  double max_normal_identity = 0.0;    // max |∇_n p̃_q − m/(q+1) f̃_{q+1}|
  double max_tangential_derivative = 0.0;  // max |∇_x̂ p̃|
};
// Samples the boundary identities of p against f in the chart frame.
BoundaryIdentityReport boundary_identities(const SymmetricTensorField& f, const SymmetricTensorField& p,
                                           const MetricField& metric, const BoundaryChart& chart,
                                           int n_samples = 128);

}  // namespace xrt::boundary
