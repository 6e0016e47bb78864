#pragma once

// Symmetric tensor fields on the closed unit disk.
//
// A field is a shared, immutable model that evaluates its symmetric
// components at every automatic-differentiation level it supports; level K
// allows K exact derivatives of the components.

#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "xrt/core/errors.hpp"
#include "xrt/metric/geodesic.hpp"
#include "xrt/metric/metric.hpp"
#include "xrt/tensor/algebra.hpp"
#include "xrt/tensor/polynomial.hpp"

namespace xrt::tensor {

// Points (x, v) of SM in structure-of-arrays layout.
struct PhaseBatch {
  std::span<const double> x1, x2, v1, v2;
  std::size_t size() const { return x1.size(); }
};

class FieldModel {
 public:
  virtual ~FieldModel() = default;

  virtual int order() const = 0;
  // Highest level accepted by eval.
  virtual int levels() const = 0;

  virtual Components<D<0>> eval0(const Vec2<D<0>>& x) const = 0;
  virtual Components<D<1>> eval1(const Vec2<D<1>>& x) const = 0;
  virtual Components<D<2>> eval2(const Vec2<D<2>>& x) const = 0;
  virtual Components<D<3>> eval3(const Vec2<D<3>>& x) const = 0;

  // out[i] = f_x(v, …, v) at every point of the batch.
  virtual void lambda_batch(const PhaseBatch& pts, std::span<double> out) const;

  template <int K>
  Components<D<K>> eval(const Vec2<D<K>>& x) const {
    if constexpr (K == 0) return eval0(x);
    else if constexpr (K == 1) return eval1(x);
    else if constexpr (K == 2) return eval2(x);
    else return eval3(x);
  }
};

// Routes the virtual evaluators to Derived::components<K>, rejecting levels
// above MaxTop at compile time and above levels() at run time.
template <class Derived, int MaxTop>
class ModelBase : public FieldModel {
 public:
  Components<D<0>> eval0(const Vec2<D<0>>& x) const override { return route<0>(x); }
  Components<D<1>> eval1(const Vec2<D<1>>& x) const override { return route<1>(x); }
  Components<D<2>> eval2(const Vec2<D<2>>& x) const override { return route<2>(x); }
  Components<D<3>> eval3(const Vec2<D<3>>& x) const override { return route<3>(x); }

 private:
  template <int K>
  Components<D<K>> route(const Vec2<D<K>>& x) const {
    if constexpr (K > MaxTop) {
      throw MissingDerivatives("tensor field has no derivative data at level " + std::to_string(K));
    } else {
      if (K > levels()) throw MissingDerivatives("tensor field has no derivative data at level " + std::to_string(K));
      return static_cast<const Derived&>(*this).template components<K>(x);
    }
  }
};

class PolynomialModel final : public ModelBase<PolynomialModel, kMaxLevel> {
 public:
  PolynomialModel(int order, std::vector<Polynomial> comps);
  int order() const override { return order_; }
  int levels() const override { return kMaxLevel; }
  void lambda_batch(const PhaseBatch& pts, std::span<double> out) const override;
  const std::vector<Polynomial>& polys() const { return comps_; }

  template <int K>
  Components<D<K>> components(const Vec2<D<K>>& x) const {
    Components<D<K>> c = zero_components<D<K>>();
    for (int q = 0; q <= order_; ++q) c[q] = comps_[q](x[0], x[1]);
    return c;
  }

 private:
  int order_;
  std::vector<Polynomial> comps_;
};

// Component values (and optionally ∂1, ∂2) on a square node grid covering
// [-1, 1]². With derivatives the interpolant is a C¹ bicubic Hermite patch;
// without them it is bilinear and exposes no derivative levels.
struct SampledGrid {
  int order = 0;
  int n = 0;  // nodes per side
  // values[q][node], node = j * n + i, x = -1 + i h, y = -1 + j h.
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> d1;  // empty when derivatives are absent
  std::vector<std::vector<double>> d2;
};

class SampledModel final : public ModelBase<SampledModel, kMaxLevel> {
 public:
  explicit SampledModel(SampledGrid grid);
  int order() const override { return grid_.order; }
  int levels() const override { return cross_.empty() ? 0 : kMaxLevel; }

  template <int K>
  Components<D<K>> components(const Vec2<D<K>>& x) const {
    using T = D<K>;
    const int n = grid_.n;
    const double h = 2.0 / (n - 1);
    auto cell = [&](double t) { return std::clamp(static_cast<int>(std::floor((t + 1.0) / h)), 0, n - 2); };
    const int i = cell(value(x[0]));
    const int j = cell(value(x[1]));
    T u = (x[0] - (-1.0 + i * h)) / h;
    T w = (x[1] - (-1.0 + j * h)) / h;
    Components<T> c = zero_components<T>();
    const std::size_t corners[4] = {static_cast<std::size_t>(j) * n + i, static_cast<std::size_t>(j) * n + i + 1,
                                    static_cast<std::size_t>(j + 1) * n + i,
                                    static_cast<std::size_t>(j + 1) * n + i + 1};
    if (cross_.empty()) {
      T b[4] = {(1.0 - u) * (1.0 - w), u * (1.0 - w), (1.0 - u) * w, u * w};
      for (int q = 0; q <= grid_.order; ++q)
        for (int k = 0; k < 4; ++k) c[q] += b[k] * grid_.values[q][corners[k]];
      return c;
    }
    // Cubic Hermite basis: value and slope at each end of [0, 1].
    auto basis = [](const T& t) {
      T t2 = t * t, t3 = t2 * t;
      return std::array<T, 4>{2.0 * t3 - 3.0 * t2 + 1.0, t3 - 2.0 * t2 + t, 3.0 * t2 - 2.0 * t3, t3 - t2};
    };
    auto bu = basis(u), bw = basis(w);
    for (int q = 0; q <= grid_.order; ++q)
      for (int k = 0; k < 4; ++k) {
        const int a = k & 1, b = k >> 1;
        const std::size_t node = corners[k];
        T pu = bu[2 * a], su = bu[2 * a + 1], pw = bw[2 * b], sw = bw[2 * b + 1];
        c[q] += pu * pw * grid_.values[q][node] + su * pw * (h * grid_.d1[q][node]) +
                pu * sw * (h * grid_.d2[q][node]) + su * sw * (h * h * cross_[q][node]);
      }
    return c;
  }

 private:
  SampledGrid grid_;
  std::vector<std::vector<double>> cross_;
};

// Components given by a generic callable F(const Vec2<T>&) -> Components<T>,
// instantiated at levels 0..Top.
template <int Top, class F>
class FunctionModel final : public ModelBase<FunctionModel<Top, F>, Top> {
 public:
  FunctionModel(int order, F f) : order_(order), f_(std::move(f)) {}
  int order() const override { return order_; }
  int levels() const override { return Top; }

  template <int K>
  Components<D<K>> components(const Vec2<D<K>>& x) const {
    return f_(x);
  }

 private:
  int order_;
  F f_;
};

class SymmetricTensorField {
 public:
  SymmetricTensorField();  // the zero scalar field
  explicit SymmetricTensorField(std::shared_ptr<const FieldModel> model);

  static SymmetricTensorField zero(int order);
  static SymmetricTensorField polynomial(int order, std::vector<Polynomial> comps);
  static SymmetricTensorField sampled(SampledGrid grid);
  template <int Top, class F>
  static SymmetricTensorField from_function(int order, F f) {
    check_order(order);
    return SymmetricTensorField(std::make_shared<const FunctionModel<Top, F>>(order, std::move(f)));
  }

  int order() const { return model_->order(); }
  int levels() const { return model_->levels(); }
  const FieldModel& model() const { return *model_; }
  std::shared_ptr<const FieldModel> model_ptr() const { return model_; }
  // Non-null when the field is an explicit polynomial.
  const PolynomialModel* as_polynomial() const { return dynamic_cast<const PolynomialModel*>(model_.get()); }

  template <int K>
  Components<D<K>> at(const Vec2<D<K>>& x) const {
    return model_->eval<K>(x);
  }
  Components<double> at(const Vec2<double>& x) const { return model_->eval0(x); }
  // Component with 1-based indices (any order).
  double component(const Vec2<double>& x, std::span<const int> indices) const;

  double lambda(const Vec2<double>& x, const Vec2<double>& v) const;
  void lambda_batch(const PhaseBatch& pts, std::span<double> out) const { model_->lambda_batch(pts, out); }

  SymmetricTensorField operator+(const SymmetricTensorField& o) const;
  SymmetricTensorField operator-(const SymmetricTensorField& o) const;
  SymmetricTensorField scaled(double c) const;

  static void check_order(int order);

 private:
  std::shared_ptr<const FieldModel> model_;
};

// Σ c_i f_i; all terms share one order.
SymmetricTensorField linear_combination(const std::vector<std::pair<double, SymmetricTensorField>>& terms);

// Order-m general tensor with polynomial entries in dense bit indexing.
struct GeneralTensorField {
  int order = 0;
  std::vector<Polynomial> entries;  // 2^order entries
};

SymmetricTensorField symmetrize(const GeneralTensorField& h);

// σ∇p, order p.order() + 1.
SymmetricTensorField sym_cov_derivative(const SymmetricTensorField& p, const metric::MetricField& metric);

SymmetricTensorField trace(const SymmetricTensorField& f, const metric::MetricField& metric);

// Trace-free q_m, q_{m−2}, … with f = Σ_j σ(g^{⊗j} ⊗ q_{m−2j}); pointwise
// solve, level 0 only.
std::vector<SymmetricTensorField> trace_free_decompose(const SymmetricTensorField& f,
                                                       const metric::MetricField& metric);
// Σ_j σ(g^{⊗j} ⊗ q_{m−2j}) at one point.
Components<double> recompose_point(const std::vector<SymmetricTensorField>& parts, const metric::MetricField& metric,
                                   const Vec2<double>& x);

double lambda_eval(const SymmetricTensorField& f, const metric::PhasePoint& z);

// (1 − |x|²) q with q given per symmetric component.
SymmetricTensorField potential_field(int order, const std::vector<Polynomial>& q);

SymmetricTensorField random_polynomial_field(int order, int degree, std::mt19937_64& rng, double scale = 1.0);
SymmetricTensorField random_potential(int order, int degree, std::mt19937_64& rng, double scale = 1.0);

struct DiskQuadrature {
  int n_radial = 24;
  int n_angular = 64;
};

// Polar Gauss–Legendre nodes of the unit disk with Euclidean weights r dr dφ.
struct DiskNodes {
  std::vector<double> x1, x2, w;
};
DiskNodes disk_nodes(const DiskQuadrature& q);

double l2_inner_tensor(const SymmetricTensorField& f, const SymmetricTensorField& h,
                       const metric::MetricField& metric, const DiskQuadrature& q = {});

// {"order": m, "components": {"12": [[coeff, p1, p2], …], …}}; index strings
// are normalized by sorting, so "21" names the same component as "12".
SymmetricTensorField field_from_json(const nlohmann::json& j);
nlohmann::json field_to_json(const SymmetricTensorField& f);
SymmetricTensorField read_field_json(const std::string& path);

}  // namespace xrt::tensor
