#pragma once

// Functions on the unit sphere bundle SM of the disk.
//
// A point of SM is (x, α) with v = g(x)^{-1/2}(cos α, sin α), so |v|_g = 1 and
// the fiber measure is dα. Sections of the normal bundle are scalar multiples
// of v⊥ = g^{-1/2}(−sin α, cos α). In these coordinates
//   V = ∂_α,  X = v^j (∂_{x^j} + B_j ∂_α),  H = v⊥^j (∂_{x^j} + B_j ∂_α)
// with B_j = ⟨e'(α), ∂_j(g^{1/2}) v − g^{1/2} Γ_j v⟩.

#include <memory>
#include <random>
#include <span>
#include <string>

#include "xrt/core/autodiff.hpp"
#include "xrt/core/errors.hpp"
#include "xrt/metric/metric.hpp"
#include "xrt/tensor/field.hpp"

namespace xrt::sm {

using metric::MetricField;

template <class T>
struct FiberFrame {
  Vec2<T> v;      // unit tangent
  Vec2<T> vperp;  // unit normal, (v, v⊥) positively oriented
  Vec2<T> b;      // connection coefficients B_j
};

template <class T>
FiberFrame<T> fiber_frame(const MetricField& metric, const Vec2<T>& x, const T& alpha) {
  using std::cos;
  using std::sin;
  metric::MetricJet<T> jet = metric.jet(x);
  Christoffel<T> gam = metric.christoffel(x);
  Mat2<T> s = sqrt_spd(jet.g);
  Mat2<T> si = inverse(s);
  T ca = cos(alpha), sa = sin(alpha);
  Vec2<T> e{ca, sa}, ep{-sa, ca};
  FiberFrame<T> f;
  f.v = mul(si, e);
  f.vperp = mul(si, ep);
  for (int j = 0; j < 2; ++j) {
    Mat2<T> ds = sqrt_spd_derivative(jet.g, jet.dg[j]);
    Vec2<T> gv;
    for (int l = 0; l < 2; ++l) gv[l] = gam[l][j][0] * f.v[0] + gam[l][j][1] * f.v[1];
    Vec2<T> dsv = mul(ds, f.v), sgv = mul(s, gv);
    f.b[j] = dot(ep, Vec2<T>{dsv[0] - sgv[0], dsv[1] - sgv[1]});
  }
  return f;
}

class SMModel {
 public:
  virtual ~SMModel() = default;

  // Highest level accepted by eval; 0 means values only.
  virtual int levels() const = 0;

  virtual D<0> eval0(const D<0>& x1, const D<0>& x2, const D<0>& a) const = 0;
  virtual D<1> eval1(const D<1>& x1, const D<1>& x2, const D<1>& a) const = 0;
  virtual D<2> eval2(const D<2>& x1, const D<2>& x2, const D<2>& a) const = 0;
  virtual D<3> eval3(const D<3>& x1, const D<3>& x2, const D<3>& a) const = 0;

  // out[j] = u(x, 2πj/n), n = out.size().
  virtual void fiber(double x1, double x2, std::span<double> out) const;

  template <int K>
  D<K> eval(const D<K>& x1, const D<K>& x2, const D<K>& a) const {
    if constexpr (K == 0) return eval0(x1, x2, a);
    else if constexpr (K == 1) return eval1(x1, x2, a);
    else if constexpr (K == 2) return eval2(x1, x2, a);
    else return eval3(x1, x2, a);
  }
};

template <class Derived, int MaxTop>
class SMModelBase : public SMModel {
 public:
  D<0> eval0(const D<0>& x1, const D<0>& x2, const D<0>& a) const override { return route<0>(x1, x2, a); }
  D<1> eval1(const D<1>& x1, const D<1>& x2, const D<1>& a) const override { return route<1>(x1, x2, a); }
  D<2> eval2(const D<2>& x1, const D<2>& x2, const D<2>& a) const override { return route<2>(x1, x2, a); }
  D<3> eval3(const D<3>& x1, const D<3>& x2, const D<3>& a) const override { return route<3>(x1, x2, a); }

 private:
  template <int K>
  D<K> route(const D<K>& x1, const D<K>& x2, const D<K>& a) const {
    if constexpr (K > MaxTop) {
      throw MissingDerivatives("SM function has no derivative data at level " + std::to_string(K));
    } else {
      if (K > levels()) throw MissingDerivatives("SM function has no derivative data at level " + std::to_string(K));
      return static_cast<const Derived&>(*this).template value<K>(x1, x2, a);
    }
  }
};

template <int Top, class F>
class FunctionSM final : public SMModelBase<FunctionSM<Top, F>, Top> {
 public:
  explicit FunctionSM(F f) : f_(std::move(f)) {}
  int levels() const override { return Top; }
  template <int K>
  D<K> value(const D<K>& x1, const D<K>& x2, const D<K>& a) const {
    return f_(x1, x2, a);
  }

 private:
  F f_;
};

// Model known only through fiber samples; point values come from
// trigonometric interpolation of a fiber with `resolution` samples.
class FiberOnlyModel : public SMModel {
 public:
  explicit FiberOnlyModel(int resolution) : resolution_(resolution) {}
  int levels() const override { return 0; }
  D<0> eval0(const D<0>& x1, const D<0>& x2, const D<0>& a) const override;
  D<1> eval1(const D<1>&, const D<1>&, const D<1>&) const override { throw missing(); }
  D<2> eval2(const D<2>&, const D<2>&, const D<2>&) const override { throw missing(); }
  D<3> eval3(const D<3>&, const D<3>&, const D<3>&) const override { throw missing(); }
  void fiber(double x1, double x2, std::span<double> out) const override = 0;
  int resolution() const { return resolution_; }

 private:
  static MissingDerivatives missing() {
    return MissingDerivatives("fiber-sampled SM function has no automatic derivatives");
  }
  int resolution_;
};

class SMFunction {
 public:
  explicit SMFunction(std::shared_ptr<const SMModel> model) : model_(std::move(model)) {}

  static SMFunction constant(double c);
  // F(T x1, T x2, T alpha) -> T, generic over the level type.
  template <int Top, class F>
  static SMFunction from_function(F f) {
    return SMFunction(std::make_shared<const FunctionSM<Top, F>>(std::move(f)));
  }

  int levels() const { return model_->levels(); }
  const SMModel& model() const { return *model_; }
  std::shared_ptr<const SMModel> model_ptr() const { return model_; }

  template <int K>
  D<K> eval(const D<K>& x1, const D<K>& x2, const D<K>& a) const {
    return model_->eval<K>(x1, x2, a);
  }
  double operator()(double x1, double x2, double alpha) const { return model_->eval0(x1, x2, alpha); }
  void fiber(double x1, double x2, std::span<double> out) const { model_->fiber(x1, x2, out); }

  SMFunction operator+(const SMFunction& o) const;
  SMFunction operator-(const SMFunction& o) const;
  SMFunction scaled(double c) const;

 private:
  std::shared_ptr<const SMModel> model_;
};

SMFunction linear_combination(const std::vector<std::pair<double, SMFunction>>& terms);

// u(x, v) = f_x(v, …, v)
SMFunction lambda_function(const tensor::SymmetricTensorField& f, const MetricField& metric);

// automatic: exact derivatives when the input carries a derivative level,
// otherwise the finite-difference route. finite_difference: central
// differences in x at fixed α and spectral differentiation in α.
enum class Derivatives { automatic, finite_difference };

struct FDOptions {
  double step = 1e-5;
  int n_alpha = 64;        // fiber resolution for point evaluation
  double tail_tol = 1e-8;  // ResolutionTooLow above this spectral tail
};

SMFunction vertical(const SMFunction& u, Derivatives mode = Derivatives::automatic, const FDOptions& fd = {});
SMFunction x_scalar(const SMFunction& u, const MetricField& metric, Derivatives mode = Derivatives::automatic,
                    const FDOptions& fd = {});
// (∇_h u)⊥ = v⊥^j δ_j u
SMFunction h_scalar(const SMFunction& u, const MetricField& metric, Derivatives mode = Derivatives::automatic,
                    const FDOptions& fd = {});
SMFunction vertical_laplacian(const SMFunction& u, Derivatives mode = Derivatives::automatic,
                              const FDOptions& fd = {});

// Section W = perp · v⊥ of the normal bundle.
struct NSection {
  SMFunction perp;
};

NSection grad_v(const SMFunction& u, Derivatives mode = Derivatives::automatic, const FDOptions& fd = {});
NSection grad_h(const SMFunction& u, const MetricField& metric, Derivatives mode = Derivatives::automatic,
                const FDOptions& fd = {});
SMFunction div_v(const NSection& w, Derivatives mode = Derivatives::automatic, const FDOptions& fd = {});
SMFunction div_h(const NSection& w, const MetricField& metric, Derivatives mode = Derivatives::automatic,
                 const FDOptions& fd = {});
// Covariant derivative along the flow; v⊥ is parallel, so (XW)⊥ = X(W⊥).
NSection x_section(const NSection& w, const MetricField& metric, Derivatives mode = Derivatives::automatic,
                   const FDOptions& fd = {});

// Coordinates W^j of a section at (x, α).
Vec2<double> section_vector(const NSection& w, const MetricField& metric, const Vec2<double>& x, double alpha);

// Horizontal δ_j u and vertical ∂_k u derivatives of the 0-homogeneous
// extension of u, at (x, α).
struct BasicDerivatives {
  Vec2<double> horizontal;
  Vec2<double> vertical;
};
BasicDerivatives basic_derivatives(const SMFunction& u, const MetricField& metric, const Vec2<double>& x,
                                   double alpha, Derivatives mode = Derivatives::automatic, const FDOptions& fd = {});

// u = w(x) Σ_{k≤K} (a_k(x) cos kα + b_k(x) sin kα) with polynomial
// coefficients; w = 1 − |x|² when vanishing on ∂(SM) is requested, else 1.
struct TrigPolynomial {
  std::vector<tensor::Polynomial> cos_coeffs;
  std::vector<tensor::Polynomial> sin_coeffs;  // entry 0 unused
  bool vanish_on_boundary = false;
};

SMFunction trig_function(const TrigPolynomial& p);
TrigPolynomial random_trig_polynomial(std::mt19937_64& rng, int max_degree, int poly_degree,
                                      bool vanish_on_boundary);
// Keeps only fiber degree k.
TrigPolynomial trig_degree_part(const TrigPolynomial& p, int k);
// Closed-form ∂_α and Δv = −∂_α² of a trigonometric polynomial.
TrigPolynomial trig_vertical(const TrigPolynomial& p);
TrigPolynomial trig_vertical_laplacian(const TrigPolynomial& p);

// Fiberwise degree-k part (modes ±k). Point values use an n_quad-point
// fiber quadrature and keep every derivative level of u.
SMFunction degree_component(const SMFunction& u, int k, int n_quad = 32);

}  // namespace xrt::sm
