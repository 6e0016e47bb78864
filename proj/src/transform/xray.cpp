#include "xrt/transform/xray.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "xrt/core/quadrature.hpp"
#include "xrt/simd/kernels.hpp"

namespace xrt::transform {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct RaySamples {
  std::vector<double> x1, x2, v1, v2, w;
  double tau = 0.0;
};

RaySamples trace(const MetricField& metric, const PhasePoint& z, const GeodesicOptions& options) {
  GeodesicOptions o = options;
  o.keep_samples = true;
  metric::GeodesicPath path = metric::geodesic_integrate(metric, z, o);
  RaySamples r;
  r.tau = path.exit_time;
  if (r.tau == 0.0) return r;
  r.w = path.weights();
  for (const auto& s : path.samples) {
    r.x1.push_back(s.x[0]);
    r.x2.push_back(s.x[1]);
    r.v1.push_back(s.v[0]);
    r.v2.push_back(s.v[1]);
  }
  return r;
}

double ray_integral(const tensor::SymmetricTensorField& f, const RaySamples& r) {
  if (r.tau == 0.0) return 0.0;
  std::vector<double> vals(r.w.size());
  f.lambda_batch({r.x1, r.x2, r.v1, r.v2}, vals);
  return simd::dot(vals, r.w);
}

double boundary_speed(const MetricField& metric, double phi) {
  Vec2<double> x{std::cos(phi), std::sin(phi)}, t{-std::sin(phi), std::cos(phi)};
  return std::sqrt(inner(metric.g(x), t, t));
}

class IntegralSM final : public sm::FiberOnlyModel {
 public:
  IntegralSM(tensor::SymmetricTensorField f, MetricField metric, GeodesicOptions options)
      : FiberOnlyModel(0), f_(std::move(f)), metric_(std::move(metric)), options_(options) {}

  D<0> eval0(const D<0>& x1, const D<0>& x2, const D<0>& a) const override {
    Vec2<double> x{x1, x2};
    return integral_function(f_, metric_, {x, metric::fiber_vector(metric_.g(x), a)}, options_);
  }
  void fiber(double x1, double x2, std::span<double> out) const override {
    const double n = static_cast<double>(out.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = eval0(x1, x2, kTwoPi * static_cast<double>(k) / n);
  }

 private:
  tensor::SymmetricTensorField f_;
  MetricField metric_;
  GeodesicOptions options_;
};

}  // namespace

BoundaryFan::BoundaryFan(const MetricField& metric, const FanSpec& spec) : spec_(spec), metric_id_(metric.id()) {
  if (spec.n_boundary < 1 || spec.n_theta < 1) throw ConfigError("boundary fan needs positive node counts");
  if (!(spec.mu_min > 0.0 && spec.mu_min < 1.0)) throw ConfigError("boundary fan needs 0 < mu_min < 1");
  const double theta_max = std::acos(spec.mu_min);
  QuadratureRule rule = gauss_legendre(spec.n_theta, -theta_max, theta_max);
  const double dphi = kTwoPi / spec.n_boundary;
  for (int i = 0; i < spec.n_boundary; ++i) {
    const double phi = dphi * i;
    const double speed = boundary_speed(metric, phi);
    boundary_length_ += speed * dphi;
    for (int j = 0; j < spec.n_theta; ++j) {
      const double theta = rule.nodes[j];
      PhasePoint z = metric::boundary_point(metric, phi, theta);
      nodes_.push_back({phi, theta, metric::fiber_angle(metric.g(z.x), z.v), z, std::cos(theta),
                        rule.weights[j] * std::cos(theta) * speed * dphi});
    }
  }
}

double mu_weight(const MetricField& metric, const PhasePoint& z) {
  if (!metric::on_boundary(z.x, 1e-9)) throw NotOnBoundary("mu_weight needs a boundary base point");
  return inner(metric.g(z.x), metric::inward_normal(metric, z.x), z.v);
}

double integral_function(const tensor::SymmetricTensorField& f, const MetricField& metric, const PhasePoint& z,
                         const GeodesicOptions& options) {
  return ray_integral(f, trace(metric, z, options));
}

sm::SMFunction integral_function_sm(const tensor::SymmetricTensorField& f, const MetricField& metric,
                                    const GeodesicOptions& options) {
  return sm::SMFunction(std::make_shared<const IntegralSM>(f, metric, options));
}

std::size_t XrayData::failures() const {
  std::size_t n = 0;
  for (bool b : failed) n += b ? 1 : 0;
  return n;
}

double XrayData::max_abs() const {
  double m = 0.0;
  for (std::size_t i = 0; i < value.size(); ++i)
    if (!failed[i]) m = std::max(m, std::abs(value[i]));
  return m;
}

XrayData xray_transform(const tensor::SymmetricTensorField& f, const MetricField& metric, const BoundaryFan& fan,
                        const GeodesicOptions& options, const std::string& field_id) {
  return xray_transform_batch({f}, metric, fan, options, {field_id}).front();
}

std::vector<XrayData> xray_transform_batch(const std::vector<tensor::SymmetricTensorField>& fields,
                                           const MetricField& metric, const BoundaryFan& fan,
                                           const GeodesicOptions& options,
                                           const std::vector<std::string>& field_ids) {
  if (fan.metric_id() != metric.id()) throw GridMismatch("boundary fan was built for metric " + fan.metric_id());
  if (!field_ids.empty() && field_ids.size() != fields.size())
    throw std::invalid_argument("one field id per field is required");
  std::vector<XrayData> out(fields.size());
  for (std::size_t j = 0; j < fields.size(); ++j) {
    out[j].metric_id = metric.id();
    out[j].field_id = field_ids.empty() ? "field" + std::to_string(j) : field_ids[j];
    out[j].step = options.step;
  }
  for (const FanNode& node : fan.nodes()) {
    RaySamples r;
    bool failed = false;
    try {
      r = trace(metric, node.z, options);
    } catch (const NumericalError&) {
      failed = true;
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      XrayData& d = out[j];
      d.phi.push_back(node.phi);
      d.alpha.push_back(node.alpha);
      d.value.push_back(failed ? 0.0 : ray_integral(fields[j], r));
      d.tau.push_back(failed ? 0.0 : r.tau);
      d.failed.push_back(failed);
    }
  }
  return out;
}

double xray_norm(const XrayData& data, const BoundaryFan& fan) {
  if (data.size() != fan.size()) throw GridMismatch("X-ray data and fan have different node counts");
  std::vector<double> terms(data.size(), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i)
    if (!data.failed[i]) terms[i] = fan.nodes()[i].weight * data.value[i] * data.value[i];
  return std::sqrt(pairwise_sum(terms));
}

void write_csv(const XrayData& data, const std::string& path,
               const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << std::setprecision(17);
  out << "# metric=" << data.metric_id << "\n# field=" << data.field_id << "\n# step=" << data.step
      << "\n# max_abs=" << data.max_abs() << "\n# failures=" << data.failures() << "\n";
  for (const auto& [key, value] : extra) out << "# " << key << "=" << value << "\n";
  out << "phi,alpha_in,value,tau\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << data.phi[i] << "," << data.alpha[i] << ",";
    if (data.failed[i])
      out << "nan";
    else
      out << data.value[i];
    out << "," << data.tau[i] << "\n";
  }
}

XrayData read_xray_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  XrayData d;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(2, eq - 2), val = line.substr(eq + 1);
      if (key == "metric") d.metric_id = val;
      else if (key == "field") d.field_id = val;
      else if (key == "step") d.step = std::stod(val);
      continue;
    }
    if (!header) {
      if (line != "phi,alpha_in,value,tau") throw ConfigError(path + ": unexpected X-ray CSV header");
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string cell[4];
    for (auto& c : cell)
      if (!std::getline(ss, c, ',')) throw ConfigError(path + ": short X-ray CSV row");
    d.phi.push_back(std::stod(cell[0]));
    d.alpha.push_back(std::stod(cell[1]));
    const bool failed = cell[2] == "nan";
    d.value.push_back(failed ? 0.0 : std::stod(cell[2]));
    d.tau.push_back(std::stod(cell[3]));
    d.failed.push_back(failed);
  }
  if (!header) throw ConfigError(path + ": missing X-ray CSV header");
  return d;
}

SantaloResult santalo_integral(const sm::SMFunction& F, const MetricField& metric, const BoundaryFan& fan,
                               const GeodesicOptions& options) {
  return santalo_integrals({F}, metric, fan, options).front();
}

std::vector<SantaloResult> santalo_integrals(const std::vector<sm::SMFunction>& F, const MetricField& metric,
                                             const BoundaryFan& fan, const GeodesicOptions& options) {
  if (fan.metric_id() != metric.id()) throw GridMismatch("boundary fan was built for metric " + fan.metric_id());
  const std::size_t nf = F.size();
  std::vector<std::vector<double>> contrib(nf);
  for (auto& c : contrib) c.reserve(fan.size());
  std::vector<double> sup(nf, 0.0), s(nf);
  for (const FanNode& node : fan.nodes()) {
    RaySamples r = trace(metric, node.z, options);
    std::fill(s.begin(), s.end(), 0.0);
    for (std::size_t i = 0; i < r.w.size(); ++i) {
      Vec2<double> x{r.x1[i], r.x2[i]}, v{r.v1[i], r.v2[i]};
      const double alpha = metric::fiber_angle(metric.g(x), v);
      for (std::size_t j = 0; j < nf; ++j) {
        const double val = F[j](x[0], x[1], alpha);
        sup[j] = std::max(sup[j], std::abs(val));
        s[j] += r.w[i] * val;
      }
    }
    for (std::size_t j = 0; j < nf; ++j) contrib[j].push_back(node.weight * s[j]);
  }

  // Omitted band: ∫_{θmax}^{π/2} τ cos θ dθ ≤ τ(θmax)(1 − sin θmax) per side.
  const double theta_max = std::acos(fan.spec().mu_min);
  const double band = 1.0 - std::sin(theta_max);
  const double dphi = kTwoPi / fan.spec().n_boundary;
  double edge = 0.0;
  for (int i = 0; i < fan.spec().n_boundary; ++i) {
    const double phi = dphi * i;
    double tau = 0.0;
    for (double th : {-theta_max, theta_max}) tau += metric::travel_time(metric, metric::boundary_point(metric, phi, th), options);
    edge += tau * boundary_speed(metric, phi) * dphi;
  }
  std::vector<SantaloResult> out(nf);
  for (std::size_t j = 0; j < nf; ++j) {
    out[j].value = pairwise_sum(contrib[j]);
    out[j].cutoff_estimate = sup[j] * band * edge;
  }
  return out;
}

}  // namespace xrt::transform
