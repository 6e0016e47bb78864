#include "xrt/sphere/function.hpp"

#include <algorithm>
#include <numbers>
#include <vector>

#include "xrt/core/fft.hpp"

namespace xrt::sm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fiber_angle_at(int j, int n) { return kTwoPi * j / n; }

void check_tail(std::span<const double> fiber, double tol) {
  const double tail = fft::tail_fraction(fiber);
  if (tail > tol)
    throw ResolutionTooLow("fiber spectrum tail " + std::to_string(tail) + " exceeds " + std::to_string(tol) +
                           " at " + std::to_string(fiber.size()) + " samples");
}

class LambdaSM final : public SMModelBase<LambdaSM, kMaxLevel> {
 public:
  LambdaSM(tensor::SymmetricTensorField f, MetricField metric) : f_(std::move(f)), metric_(std::move(metric)) {}
  int levels() const override { return f_.levels(); }

  template <int K>
  D<K> value(const D<K>& x1, const D<K>& x2, const D<K>& a) const {
    Vec2<D<K>> x{x1, x2};
    Vec2<D<K>> v = metric::fiber_vector(metric_.g(x), a);
    return tensor::contract_lambda(f_.order(), f_.template at<K>(x), v);
  }

  void fiber(double x1, double x2, std::span<double> out) const override {
    const std::size_t n = out.size();
    std::vector<double> xs1(n, x1), xs2(n, x2), v1(n), v2(n);
    Mat2<double> g = metric_.g(Vec2<double>{x1, x2});
    for (std::size_t j = 0; j < n; ++j) {
      Vec2<double> v = metric::fiber_vector(g, fiber_angle_at(static_cast<int>(j), static_cast<int>(n)));
      v1[j] = v[0];
      v2[j] = v[1];
    }
    f_.lambda_batch({xs1, xs2, v1, v2}, out);
  }

 private:
  tensor::SymmetricTensorField f_;
  MetricField metric_;
};

class CombinationSM final : public SMModelBase<CombinationSM, kMaxLevel> {
 public:
  explicit CombinationSM(std::vector<std::pair<double, std::shared_ptr<const SMModel>>> terms)
      : terms_(std::move(terms)) {
    levels_ = kMaxLevel;
    for (const auto& t : terms_) levels_ = std::min(levels_, t.second->levels());
  }
  int levels() const override { return levels_; }

  template <int K>
  D<K> value(const D<K>& x1, const D<K>& x2, const D<K>& a) const {
    D<K> s(0.0);
    for (const auto& [c, u] : terms_) s += c * u->template eval<K>(x1, x2, a);
    return s;
  }

  void fiber(double x1, double x2, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> part(out.size());
    for (const auto& [c, u] : terms_) {
      u->fiber(x1, x2, part);
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * part[j];
    }
  }

 private:
  std::vector<std::pair<double, std::shared_ptr<const SMModel>>> terms_;
  int levels_ = 0;
};

class VerticalAD final : public SMModelBase<VerticalAD, kMaxLevel - 1> {
 public:
  explicit VerticalAD(SMFunction u) : u_(std::move(u)) {}
  int levels() const override { return std::min(u_.levels() - 1, kMaxLevel - 1); }

  template <int K>
  D<K> value(const D<K>& x1, const D<K>& x2, const D<K>& a) const {
    auto s = seed3<K>(x1, x2, a);
    return u_.template eval<K + 1>(s[0], s[1], s[2]).d[2];
  }

 private:
  SMFunction u_;
};

// X (horizontal = false) or H (horizontal = true) by exact derivatives.
class FlowAD final : public SMModelBase<FlowAD, kMaxLevel - 1> {
 public:
  FlowAD(SMFunction u, MetricField metric, bool horizontal)
      : u_(std::move(u)), metric_(std::move(metric)), horizontal_(horizontal) {}
  int levels() const override { return std::min(u_.levels() - 1, kMaxLevel - 1); }

  template <int K>
  D<K> value(const D<K>& x1, const D<K>& x2, const D<K>& a) const {
    auto s = seed3<K>(x1, x2, a);
    D<K + 1> u = u_.template eval<K + 1>(s[0], s[1], s[2]);
    FiberFrame<D<K>> fr = fiber_frame(metric_, Vec2<D<K>>{x1, x2}, a);
    const Vec2<D<K>>& dir = horizontal_ ? fr.vperp : fr.v;
    return dir[0] * (u.d[0] + fr.b[0] * u.d[2]) + dir[1] * (u.d[1] + fr.b[1] * u.d[2]);
  }

 private:
  SMFunction u_;
  MetricField metric_;
  bool horizontal_;
};

class SpectralVertical final : public FiberOnlyModel {
 public:
  SpectralVertical(SMFunction u, const FDOptions& fd) : FiberOnlyModel(fd.n_alpha), u_(std::move(u)), fd_(fd) {}
  void fiber(double x1, double x2, std::span<double> out) const override {
    std::vector<double> f(out.size());
    u_.fiber(x1, x2, f);
    check_tail(f, fd_.tail_tol);
    fft::derivative(f, out, 1);
  }

 private:
  SMFunction u_;
  FDOptions fd_;
};

class FlowFD final : public FiberOnlyModel {
 public:
  FlowFD(SMFunction u, MetricField metric, bool horizontal, const FDOptions& fd)
      : FiberOnlyModel(fd.n_alpha), u_(std::move(u)), metric_(std::move(metric)), horizontal_(horizontal), fd_(fd) {}

  void fiber(double x1, double x2, std::span<double> out) const override {
    const std::size_t n = out.size();
    const double h = fd_.step;
    std::vector<double> f(n), fa(n), fp(n), fm(n);
    u_.fiber(x1, x2, f);
    check_tail(f, fd_.tail_tol);
    fft::derivative(f, fa, 1);
    std::array<std::vector<double>, 2> dx;
    for (int j = 0; j < 2; ++j) {
      u_.fiber(x1 + (j == 0 ? h : 0.0), x2 + (j == 1 ? h : 0.0), fp);
      u_.fiber(x1 - (j == 0 ? h : 0.0), x2 - (j == 1 ? h : 0.0), fm);
      dx[j].resize(n);
      for (std::size_t k = 0; k < n; ++k) dx[j][k] = (fp[k] - fm[k]) / (2.0 * h);
    }
    for (std::size_t k = 0; k < n; ++k) {
      FiberFrame<double> fr =
          fiber_frame(metric_, Vec2<double>{x1, x2}, fiber_angle_at(static_cast<int>(k), static_cast<int>(n)));
      const Vec2<double>& dir = horizontal_ ? fr.vperp : fr.v;
      out[k] = dir[0] * (dx[0][k] + fr.b[0] * fa[k]) + dir[1] * (dx[1][k] + fr.b[1] * fa[k]);
    }
  }

 private:
  SMFunction u_;
  MetricField metric_;
  bool horizontal_;
  FDOptions fd_;
};

class DegreeSM final : public SMModelBase<DegreeSM, kMaxLevel> {
 public:
  DegreeSM(SMFunction u, int k, int n_quad) : u_(std::move(u)), k_(k), n_(n_quad) {}
  int levels() const override { return u_.levels(); }

  template <int K>
  D<K> value(const D<K>& x1, const D<K>& x2, const D<K>& a) const {
    using std::cos;
    D<K> s(0.0);
    const double w = (k_ == 0 ? 1.0 : 2.0) / n_;
    for (int j = 0; j < n_; ++j) {
      const double beta = fiber_angle_at(j, n_);
      s += w * (u_.template eval<K>(x1, x2, D<K>(beta)) * cos(static_cast<double>(k_) * (a - beta)));
    }
    return s;
  }

  void fiber(double x1, double x2, std::span<double> out) const override {
    std::vector<double> f(out.size());
    u_.fiber(x1, x2, f);
    fft::project_degree(f, out, k_);
  }

 private:
  SMFunction u_;
  int k_;
  int n_;
};

bool use_ad(const SMFunction& u, Derivatives mode) { return mode == Derivatives::automatic && u.levels() >= 1; }

}  // namespace

void SMModel::fiber(double x1, double x2, std::span<double> out) const {
  const int n = static_cast<int>(out.size());
  for (int j = 0; j < n; ++j) out[j] = eval0(x1, x2, fiber_angle_at(j, n));
}

D<0> FiberOnlyModel::eval0(const D<0>& x1, const D<0>& x2, const D<0>& a) const {
  std::vector<double> f(resolution_);
  fiber(x1, x2, f);
  return fft::interpolate(f, a);
}

SMFunction SMFunction::constant(double c) {
  return from_function<kMaxLevel>([c](const auto& x1, const auto&, const auto&) {
    using T = std::decay_t<decltype(x1)>;
    return T(c);
  });
}

SMFunction SMFunction::operator+(const SMFunction& o) const { return linear_combination({{1.0, *this}, {1.0, o}}); }
SMFunction SMFunction::operator-(const SMFunction& o) const { return linear_combination({{1.0, *this}, {-1.0, o}}); }
SMFunction SMFunction::scaled(double c) const { return linear_combination({{c, *this}}); }

SMFunction linear_combination(const std::vector<std::pair<double, SMFunction>>& terms) {
  std::vector<std::pair<double, std::shared_ptr<const SMModel>>> parts;
  for (const auto& [c, u] : terms) parts.emplace_back(c, u.model_ptr());
  return SMFunction(std::make_shared<const CombinationSM>(std::move(parts)));
}

SMFunction lambda_function(const tensor::SymmetricTensorField& f, const MetricField& metric) {
  return SMFunction(std::make_shared<const LambdaSM>(f, metric));
}

SMFunction vertical(const SMFunction& u, Derivatives mode, const FDOptions& fd) {
  if (use_ad(u, mode)) return SMFunction(std::make_shared<const VerticalAD>(u));
  return SMFunction(std::make_shared<const SpectralVertical>(u, fd));
}

SMFunction x_scalar(const SMFunction& u, const MetricField& metric, Derivatives mode, const FDOptions& fd) {
  if (use_ad(u, mode)) return SMFunction(std::make_shared<const FlowAD>(u, metric, false));
  return SMFunction(std::make_shared<const FlowFD>(u, metric, false, fd));
}

SMFunction h_scalar(const SMFunction& u, const MetricField& metric, Derivatives mode, const FDOptions& fd) {
  if (use_ad(u, mode)) return SMFunction(std::make_shared<const FlowAD>(u, metric, true));
  return SMFunction(std::make_shared<const FlowFD>(u, metric, true, fd));
}

SMFunction vertical_laplacian(const SMFunction& u, Derivatives mode, const FDOptions& fd) {
  return vertical(vertical(u, mode, fd), mode, fd).scaled(-1.0);
}

NSection grad_v(const SMFunction& u, Derivatives mode, const FDOptions& fd) { return {vertical(u, mode, fd)}; }

NSection grad_h(const SMFunction& u, const MetricField& metric, Derivatives mode, const FDOptions& fd) {
  return {h_scalar(u, metric, mode, fd)};
}

SMFunction div_v(const NSection& w, Derivatives mode, const FDOptions& fd) { return vertical(w.perp, mode, fd); }

SMFunction div_h(const NSection& w, const MetricField& metric, Derivatives mode, const FDOptions& fd) {
  return h_scalar(w.perp, metric, mode, fd);
}

NSection x_section(const NSection& w, const MetricField& metric, Derivatives mode, const FDOptions& fd) {
  return {x_scalar(w.perp, metric, mode, fd)};
}

Vec2<double> section_vector(const NSection& w, const MetricField& metric, const Vec2<double>& x, double alpha) {
  Vec2<double> vp = fiber_frame(metric, x, alpha).vperp;
  double c = w.perp(x[0], x[1], alpha);
  return {c * vp[0], c * vp[1]};
}

BasicDerivatives basic_derivatives(const SMFunction& u, const MetricField& metric, const Vec2<double>& x,
                                   double alpha, Derivatives mode, const FDOptions& fd) {
  double ux[2], ua;
  if (use_ad(u, mode)) {
    auto s = seed3<0>(x[0], x[1], alpha);
    D<1> d = u.eval<1>(s[0], s[1], s[2]);
    ux[0] = d.d[0];
    ux[1] = d.d[1];
    ua = d.d[2];
  } else {
    const int n = fd.n_alpha;
    std::vector<double> f(n), fa(n), fp(n), fm(n), diff(n);
    u.fiber(x[0], x[1], f);
    check_tail(f, fd.tail_tol);
    fft::derivative(f, fa, 1);
    ua = fft::interpolate(fa, alpha);
    for (int j = 0; j < 2; ++j) {
      const double h = fd.step;
      u.fiber(x[0] + (j == 0 ? h : 0.0), x[1] + (j == 1 ? h : 0.0), fp);
      u.fiber(x[0] - (j == 0 ? h : 0.0), x[1] - (j == 1 ? h : 0.0), fm);
      for (int k = 0; k < n; ++k) diff[k] = (fp[k] - fm[k]) / (2.0 * h);
      ux[j] = fft::interpolate(diff, alpha);
    }
  }
  FiberFrame<double> fr = fiber_frame(metric, x, alpha);
  Mat2<double> s = sqrt_spd(metric.g(x));
  Vec2<double> sep = mul(s, Vec2<double>{-std::sin(alpha), std::cos(alpha)});
  BasicDerivatives out;
  for (int j = 0; j < 2; ++j) {
    out.horizontal[j] = ux[j] + fr.b[j] * ua;
    out.vertical[j] = sep[j] * ua;
  }
  return out;
}

SMFunction trig_function(const TrigPolynomial& p) {
  if (p.sin_coeffs.size() != p.cos_coeffs.size()) throw std::invalid_argument("trig polynomial needs matching cos/sin");
  return SMFunction::from_function<kMaxLevel>([p](const auto& x1, const auto& x2, const auto& a) {
    using T = std::decay_t<decltype(x1)>;
    using std::cos;
    using std::sin;
    T s(0.0);
    for (std::size_t k = 0; k < p.cos_coeffs.size(); ++k) {
      T ka = static_cast<double>(k) * a;
      s += p.cos_coeffs[k](x1, x2) * cos(ka);
      if (k > 0) s += p.sin_coeffs[k](x1, x2) * sin(ka);
    }
    if (p.vanish_on_boundary) s *= 1.0 - x1 * x1 - x2 * x2;
    return s;
  });
}

TrigPolynomial random_trig_polynomial(std::mt19937_64& rng, int max_degree, int poly_degree,
                                      bool vanish_on_boundary) {
  TrigPolynomial p;
  p.vanish_on_boundary = vanish_on_boundary;
  for (int k = 0; k <= max_degree; ++k) {
    p.cos_coeffs.push_back(tensor::random_polynomial(rng, poly_degree));
    p.sin_coeffs.push_back(k == 0 ? tensor::Polynomial() : tensor::random_polynomial(rng, poly_degree));
  }
  return p;
}

TrigPolynomial trig_degree_part(const TrigPolynomial& p, int k) {
  TrigPolynomial out;
  out.vanish_on_boundary = p.vanish_on_boundary;
  out.cos_coeffs.assign(p.cos_coeffs.size(), tensor::Polynomial());
  out.sin_coeffs.assign(p.sin_coeffs.size(), tensor::Polynomial());
  if (k < static_cast<int>(p.cos_coeffs.size())) {
    out.cos_coeffs[k] = p.cos_coeffs[k];
    out.sin_coeffs[k] = p.sin_coeffs[k];
  }
  return out;
}

TrigPolynomial trig_vertical(const TrigPolynomial& p) {
  TrigPolynomial out = p;
  for (std::size_t k = 0; k < p.cos_coeffs.size(); ++k) {
    const double kk = static_cast<double>(k);
    out.cos_coeffs[k] = k == 0 ? tensor::Polynomial() : p.sin_coeffs[k].scaled(kk);
    out.sin_coeffs[k] = k == 0 ? tensor::Polynomial() : p.cos_coeffs[k].scaled(-kk);
  }
  return out;
}

TrigPolynomial trig_vertical_laplacian(const TrigPolynomial& p) {
  TrigPolynomial out = p;
  for (std::size_t k = 0; k < p.cos_coeffs.size(); ++k) {
    const double k2 = static_cast<double>(k * k);
    out.cos_coeffs[k] = p.cos_coeffs[k].scaled(k2);
    out.sin_coeffs[k] = p.sin_coeffs[k].scaled(k2);
  }
  return out;
}

SMFunction degree_component(const SMFunction& u, int k, int n_quad) {
  if (k < 0) throw std::invalid_argument("fiber degree must be non-negative");
  if (n_quad <= 2 * k) throw ResolutionTooLow("fiber quadrature too coarse for degree " + std::to_string(k));
  return SMFunction(std::make_shared<const DegreeSM>(u, k, n_quad));
}

}  // namespace xrt::sm
