#pragma once

// C^{1,1} metrics on the closed Euclidean unit disk.

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "xrt/core/errors.hpp"
#include "xrt/core/small.hpp"

namespace xrt::metric {

struct Euclidean {};

// g = 4ρ² / (1 − ρ²|x|²)² δ, constant curvature −1.
struct HyperbolicLike {
  double rho = 0.5;
};

// g = exp(2ε h(x_axis)) δ with h(t) = t² for t ≥ 0 and 0 otherwise.
// Curvature is −2ε e^{−2φ} on the positive side and 0 on the other.
struct ConformalC11 {
  double eps = 0.25;
  int axis = 0;
};

// Metric given by samples of g and ∂g on a rectangular node grid.
struct GridSampled {
  int nx = 0;
  int ny = 0;
  double x0 = -1.0;
  double y0 = -1.0;
  double hx = 0.0;
  double hy = 0.0;
  // Per node (row-major, x fastest): g11 g12 g22 ∂1g11 ∂1g12 ∂1g22 ∂2g11 ∂2g12 ∂2g22.
  std::vector<std::array<double, 9>> nodes;
  // Mixed derivative ∂1∂2 g per node, estimated from the stored ∂g.
  std::vector<std::array<double, 3>> cross;
  std::string source;
};

template <class T>
struct MetricJet {
  Mat2<T> g;
  std::array<Mat2<T>, 2> dg;  // dg[k][i][j] = ∂_k g_ij
};

struct CurvatureSample {
  double value = 0.0;
  bool non_smooth = false;  // x on the kink set; value is one-sided
};

class MetricField {
 public:
  using Family = std::variant<Euclidean, HyperbolicLike, ConformalC11, GridSampled>;

  explicit MetricField(Family family);

  static MetricField euclidean() { return MetricField(Euclidean{}); }
  static MetricField hyperbolic_like(double rho) { return MetricField(HyperbolicLike{rho}); }
  static MetricField conformal_c11(double eps, int axis = 0) {
    return MetricField(ConformalC11{eps, axis});
  }
  // Samples an existing metric (values and analytic first derivatives) on an
  // n x n grid over [-1, 1]².
  static MetricField sampled_from(const MetricField& source, int n);
  static MetricField from_csv(const std::string& path);
  void write_csv(const std::string& path) const;

  const Family& family() const { return *family_; }
  std::string id() const;
  bool is_flat() const { return std::holds_alternative<Euclidean>(*family_); }

  template <class T> Mat2<T> g(const Vec2<T>& x) const { return jet(x).g; }
  template <class T> MetricJet<T> jet(const Vec2<T>& x) const;
  template <class T> Christoffel<T> christoffel(const Vec2<T>& x) const;

  // x lies on the set where the second derivatives of g jump.
  bool on_kink(const Vec2<double>& x, double tol = 1e-12) const;
  // sup over the disk of the largest singular value of g^{1/2} (sampled).
  double speed_bound() const { return speed_bound_; }

 private:
  std::shared_ptr<const Family> family_;
  double speed_bound_ = 1.0;
};

// Conformal factor φ with its gradient, for the conformally flat families.
template <class T>
struct ConformalJet {
  T phi;
  Vec2<T> grad;
};

template <class T>
ConformalJet<T> conformal_jet(const HyperbolicLike& m, const Vec2<T>& x) {
  using std::log;
  const double r2 = m.rho * m.rho;
  T q = 1.0 - r2 * (x[0] * x[0] + x[1] * x[1]);
  return {log(2.0 * m.rho / q), {2.0 * r2 * x[0] / q, 2.0 * r2 * x[1] / q}};
}

template <class T>
ConformalJet<T> conformal_jet(const ConformalC11& m, const Vec2<T>& x) {
  const T& t = x[m.axis];
  ConformalJet<T> c{T(0.0), {T(0.0), T(0.0)}};
  if (t >= 0.0) {
    c.phi = m.eps * t * t;
    c.grad[m.axis] = 2.0 * m.eps * t;
  }
  return c;
}

// Bicubic Hermite patch through stored values and first derivatives, so the
// returned ∂g is exactly the derivative of the returned g.
template <class T>
MetricJet<T> grid_jet(const GridSampled& m, const Vec2<T>& x) {
  double fx = (value(x[0]) - m.x0) / m.hx;
  double fy = (value(x[1]) - m.y0) / m.hy;
  int i = std::clamp(static_cast<int>(std::floor(fx)), 0, m.nx - 2);
  int j = std::clamp(static_cast<int>(std::floor(fy)), 0, m.ny - 2);
  T u = (x[0] - (m.x0 + i * m.hx)) / m.hx;
  T w = (x[1] - (m.y0 + j * m.hy)) / m.hy;
  // Hermite basis [h00, h10, h01, h11] and derivatives.
  auto basis = [](const T& t) {
    T t2 = t * t, t3 = t2 * t;
    return std::array<T, 4>{2.0 * t3 - 3.0 * t2 + 1.0, t3 - 2.0 * t2 + t, 3.0 * t2 - 2.0 * t3, t3 - t2};
  };
  auto dbasis = [](const T& t) {
    T t2 = t * t;
    return std::array<T, 4>{6.0 * t2 - 6.0 * t, 3.0 * t2 - 4.0 * t + 1.0, 6.0 * t - 6.0 * t2, 3.0 * t2 - 2.0 * t};
  };
  const auto bu = basis(u), bw = basis(w), du = dbasis(u), dw = dbasis(w);
  std::array<T, 3> val, dx, dy;
  for (int c = 0; c < 3; ++c) val[c] = dx[c] = dy[c] = T(0.0);
  for (int cj = 0; cj < 2; ++cj)
    for (int ci = 0; ci < 2; ++ci) {
      const auto& n = m.nodes[static_cast<std::size_t>(j + cj) * m.nx + i + ci];
      const auto& cross = m.cross[static_cast<std::size_t>(j + cj) * m.nx + i + ci];
      const int a0 = 2 * ci, a1 = 2 * ci + 1, b0 = 2 * cj, b1 = 2 * cj + 1;
      for (int c = 0; c < 3; ++c) {
        const double f = n[c], fu = n[3 + c] * m.hx, fw = n[6 + c] * m.hy, fuw = cross[c] * m.hx * m.hy;
        val[c] += f * bu[a0] * bw[b0] + fu * bu[a1] * bw[b0] + fw * bu[a0] * bw[b1] + fuw * bu[a1] * bw[b1];
        dx[c] += (f * du[a0] * bw[b0] + fu * du[a1] * bw[b0] + fw * du[a0] * bw[b1] + fuw * du[a1] * bw[b1]) / m.hx;
        dy[c] += (f * bu[a0] * dw[b0] + fu * bu[a1] * dw[b0] + fw * bu[a0] * dw[b1] + fuw * bu[a1] * dw[b1]) / m.hy;
      }
    }
  MetricJet<T> jet;
  jet.g = {{{val[0], val[1]}, {val[1], val[2]}}};
  jet.dg[0] = {{{dx[0], dx[1]}, {dx[1], dx[2]}}};
  jet.dg[1] = {{{dy[0], dy[1]}, {dy[1], dy[2]}}};
  return jet;
}

template <class T>
MetricJet<T> MetricField::jet(const Vec2<T>& x) const {
  using std::exp;
  auto conformal = [](const ConformalJet<T>& c) {
    T e = exp(2.0 * c.phi);
    MetricJet<T> jet;
    jet.g = {{{e, T(0.0)}, {T(0.0), e}}};
    for (int k = 0; k < 2; ++k) {
      T d = 2.0 * c.grad[k] * e;
      jet.dg[k] = {{{d, T(0.0)}, {T(0.0), d}}};
    }
    return jet;
  };
  return std::visit(
      [&](const auto& m) -> MetricJet<T> {
        using F = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<F, Euclidean>) {
          MetricJet<T> jet;
          jet.g = identity2<T>();
          Mat2<T> z = {{{T(0.0), T(0.0)}, {T(0.0), T(0.0)}}};
          jet.dg = {z, z};
          return jet;
        } else if constexpr (std::is_same_v<F, GridSampled>) {
          return grid_jet(m, x);
        } else {
          return conformal(conformal_jet(m, x));
        }
      },
      *family_);
}

template <class T>
Christoffel<T> christoffel_from_jet(const MetricJet<T>& jet) {
  if (value(det(jet.g)) <= 0.0) throw SingularMetric("metric determinant is not positive");
  Mat2<T> gi = inverse(jet.g);
  Christoffel<T> gam;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = j; k < 2; ++k) {
        T s(0.0);
        for (int l = 0; l < 2; ++l)
          s += gi[i][l] * (jet.dg[j][l][k] + jet.dg[k][l][j] - jet.dg[l][j][k]);
        gam[i][j][k] = 0.5 * s;
        gam[i][k][j] = gam[i][j][k];
      }
  return gam;
}

template <class T>
Christoffel<T> conformal_christoffel(const Vec2<T>& dphi) {
  // Γ^i_{jk} = δ^i_j ∂_kφ + δ^i_k ∂_jφ − δ_jk ∂_iφ
  Christoffel<T> gam;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        T s(0.0);
        if (i == j) s += dphi[k];
        if (i == k) s += dphi[j];
        if (j == k) s -= dphi[i];
        gam[i][j][k] = s;
      }
  return gam;
}

template <class T>
Christoffel<T> MetricField::christoffel(const Vec2<T>& x) const {
  return std::visit(
      [&](const auto& m) -> Christoffel<T> {
        using F = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<F, Euclidean>) {
          return conformal_christoffel<T>({T(0.0), T(0.0)});
        } else if constexpr (std::is_same_v<F, GridSampled>) {
          return christoffel_from_jet(grid_jet(m, x));
        } else {
          return conformal_christoffel(conformal_jet(m, x).grad);
        }
      },
      *family_);
}

// Sectional curvature from exact derivatives of Γ; on the kink set the value
// is taken from the branch selected by the evaluation point.
CurvatureSample gauss_curvature(const MetricField& metric, const Vec2<double>& x);

// Fiber frame helpers: α is the Euclidean angle of g^{1/2} v.
template <class T>
Vec2<T> fiber_vector(const Mat2<T>& g, const T& alpha) {
  using std::cos;
  using std::sin;
  return mul(inverse(sqrt_spd(g)), Vec2<T>{cos(alpha), sin(alpha)});
}

double fiber_angle(const Mat2<double>& g, const Vec2<double>& v);

}  // namespace xrt::metric
