#include "xrt/sphere/grid.hpp"

#include <fstream>
#include <iomanip>
#include <numbers>

#include "xrt/core/fft.hpp"
#include "xrt/core/quadrature.hpp"
#include "xrt/simd/kernels.hpp"

namespace xrt::sm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_grid(const SMSamples& a, const SMSamples& b) {
  if (!a.grid || !b.grid || !a.grid->compatible(*b.grid)) throw GridMismatch("SM samples live on different grids");
}

}  // namespace

SMGrid::SMGrid(const MetricField& metric, const SMGridSpec& spec) : spec_(spec), metric_id_(metric.id()) {
  if (spec.n_radial < 1 || spec.n_angular < 1) throw ConfigError("SM grid needs positive spatial node counts");
  if (spec.n_alpha < 4 || spec.n_alpha % 2 != 0) throw ConfigError("SM grid needs an even fiber count >= 4");
  QuadratureRule radial = gauss_legendre(spec.n_radial, 0.0, 1.0);
  const double dphi = kTwoPi / spec.n_angular;
  for (int i = 0; i < spec.n_radial; ++i)
    for (int j = 0; j < spec.n_angular; ++j) {
      const double r = radial.nodes[i], phi = dphi * (j + 0.5);
      Vec2<double> x{r * std::cos(phi), r * std::sin(phi)};
      x1_.push_back(x[0]);
      x2_.push_back(x[1]);
      w_.push_back(radial.weights[i] * r * dphi * std::sqrt(det(metric.g(x))));
    }
}

double SMGrid::alpha(int k) const { return kTwoPi * k / spec_.n_alpha; }
double SMGrid::alpha_weight() const { return kTwoPi / spec_.n_alpha; }

bool SMGrid::compatible(const SMGrid& o) const {
  return this == &o || (spec_.n_radial == o.spec_.n_radial && spec_.n_angular == o.spec_.n_angular &&
                        spec_.n_alpha == o.spec_.n_alpha && metric_id_ == o.metric_id_);
}

SMSamples sample(const SMFunction& u, std::shared_ptr<const SMGrid> grid) {
  SMSamples s{grid, std::vector<double>(grid->size())};
  for (int node = 0; node < grid->n_nodes(); ++node) u.fiber(grid->x1(node), grid->x2(node), s.fiber(node));
  return s;
}

SMSamples zeros_like(const SMSamples& s) { return {s.grid, std::vector<double>(s.values.size(), 0.0)}; }

SMSamples combine(double a, const SMSamples& u, double b, const SMSamples& w) {
  require_same_grid(u, w);
  SMSamples out = zeros_like(u);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a * u.values[i] + b * w.values[i];
  return out;
}

double sm_weighted_inner(const std::vector<double>& node_weight, const SMSamples& u, const SMSamples& w) {
  require_same_grid(u, w);
  const SMGrid& g = *u.grid;
  double s = 0.0;
  for (int node = 0; node < g.n_nodes(); ++node)
    s += node_weight[node] * g.area_weight(node) * simd::dot(u.fiber(node), w.fiber(node));
  return s * g.alpha_weight();
}

double sm_inner(const SMSamples& u, const SMSamples& w) {
  require_same_grid(u, w);
  return sm_weighted_inner(std::vector<double>(u.grid->n_nodes(), 1.0), u, w);
}

double sm_norm(const SMSamples& u) { return std::sqrt(std::max(0.0, sm_inner(u, u))); }

double n_inner(const SMSamples& w_perp, const SMSamples& z_perp) { return sm_inner(w_perp, z_perp); }

SMSamples vertical(const SMSamples& u) {
  SMSamples out = zeros_like(u);
  for (int node = 0; node < u.grid->n_nodes(); ++node) fft::derivative(u.fiber(node), out.fiber(node), 1);
  return out;
}

SMSamples vertical_laplacian(const SMSamples& u) {
  SMSamples out = zeros_like(u);
  for (int node = 0; node < u.grid->n_nodes(); ++node) fft::derivative(u.fiber(node), out.fiber(node), 2);
  for (double& x : out.values) x = -x;
  return out;
}

std::complex<double> FiberSpectrum::coefficient(int node, int k) const {
  const int n = grid->n_alpha();
  if (k <= -n / 2 || k > n / 2) return 0.0;
  return k >= 0 ? coeffs[node][k] : std::conj(coeffs[node][-k]);
}

FiberSpectrum fiber_fourier(const SMSamples& u) {
  FiberSpectrum s{u.grid, {}};
  const int n = u.grid->n_alpha();
  s.coeffs.resize(u.grid->n_nodes(), std::vector<std::complex<double>>(n / 2 + 1));
  for (int node = 0; node < u.grid->n_nodes(); ++node) fft::forward(u.fiber(node), s.coeffs[node]);
  return s;
}

SMSamples inverse_fourier(const FiberSpectrum& s) {
  SMSamples u{s.grid, std::vector<double>(s.grid->size())};
  for (int node = 0; node < s.grid->n_nodes(); ++node) fft::inverse(s.coeffs[node], u.fiber(node));
  return u;
}

SMSamples degree_part(const SMSamples& u, int k) {
  SMSamples out = zeros_like(u);
  for (int node = 0; node < u.grid->n_nodes(); ++node) fft::project_degree(u.fiber(node), out.fiber(node), k);
  return out;
}

double degree_leakage(const SMSamples& u, int k) {
  const double norm = sm_norm(u);
  if (norm == 0.0) return 0.0;
  return sm_norm(combine(1.0, u, -1.0, degree_part(u, k))) / norm;
}

XPlusMinus x_plus_minus(const SMFunction& uk, int k, const MetricField& metric, std::shared_ptr<const SMGrid> grid,
                        Derivatives mode, double tol) {
  if (2 * (k + 1) >= grid->n_alpha()) throw ResolutionTooLow("fiber grid too coarse for degree " + std::to_string(k + 1));
  const double leak = degree_leakage(sample(uk, grid), k);
  if (leak > tol)
    throw NotPureDegree("input has relative leakage " + std::to_string(leak) + " outside degree " + std::to_string(k));
  SMSamples xu = sample(x_scalar(uk, metric, mode), grid);
  XPlusMinus out{degree_part(xu, k + 1), k == 0 ? zeros_like(xu) : degree_part(xu, k - 1)};
  return out;
}

void write_csv(const SMSamples& u, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "x1,x2,alpha,value\n" << std::setprecision(17);
  const SMGrid& g = *u.grid;
  for (int node = 0; node < g.n_nodes(); ++node)
    for (int k = 0; k < g.n_alpha(); ++k)
      out << g.x1(node) << "," << g.x2(node) << "," << g.alpha(k) << "," << u.at(node, k) << "\n";
}

}  // namespace xrt::sm
