#include "xrt/verify/chain.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "xrt/core/fft.hpp"
#include "xrt/verify/constants.hpp"

namespace xrt::verify {

TransportStencil::TransportStencil(const sm::SMFunction& u, const MetricField& metric, GridPtr grid, double step)
    : metric_(metric), grid_(std::move(grid)), step_(step), center_(sm::sample(u, grid_)) {
  const sm::SMGrid& g = *grid_;
  const std::array<Vec2<double>, 4> dirs{{{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}};
  for (int s = 0; s < 4; ++s) {
    shifted_[s] = sm::zeros_like(center_);
    for (int node = 0; node < g.n_nodes(); ++node) {
      const double x1 = g.x1(node) + dirs[s][0], x2 = g.x2(node) + dirs[s][1];
      if (x1 * x1 + x2 * x2 > 1.0) throw ConfigError("transport stencil leaves the disk; reduce the step");
      u.fiber(x1, x2, shifted_[s].fiber(node));
    }
  }
}

sm::XPlusMinus TransportStencil::x_split(int k) const {
  const sm::SMGrid& g = *grid_;
  const int n = g.n_alpha();
  if (2 * (k + 1) >= n) throw ResolutionTooLow("fiber grid too coarse for degree " + std::to_string(k + 1));
  sm::SMSamples xu = sm::zeros_like(center_);
  std::vector<double> pc(n), da(n), p[4];
  for (auto& v : p) v.resize(n);
  for (int node = 0; node < g.n_nodes(); ++node) {
    fft::project_degree(center_.fiber(node), pc, k);
    fft::derivative(pc, da, 1);
    for (int s = 0; s < 4; ++s) fft::project_degree(shifted_[s].fiber(node), p[s], k);
    const Vec2<double> x{g.x1(node), g.x2(node)};
    for (int i = 0; i < n; ++i) {
      const sm::FiberFrame<double> fr = sm::fiber_frame(metric_, x, g.alpha(i));
      const double d1 = (p[0][i] - p[1][i]) / (2.0 * step_), d2 = (p[2][i] - p[3][i]) / (2.0 * step_);
      xu.at(node, i) = fr.v[0] * (d1 + fr.b[0] * da[i]) + fr.v[1] * (d2 + fr.b[1] * da[i]);
    }
  }
  return {sm::degree_part(xu, k + 1), k == 0 ? sm::zeros_like(xu) : sm::degree_part(xu, k - 1)};
}

std::vector<CheckEntry> check_l2_chain(const TransportStencil& u, int order, double scale,
                                       const ChainOptions& options, const std::string& label) {
  std::map<int, std::pair<double, double>> norms;  // k -> (‖X₊u_k‖², ‖X₋u_k‖²)
  auto at = [&](int k) -> const std::pair<double, double>& {
    auto it = norms.find(k);
    if (it == norms.end()) {
      const auto s = u.x_split(k);
      it = norms.emplace(k, std::pair{sm::sm_inner(s.plus, s.plus), sm::sm_inner(s.minus, s.minus)}).first;
    }
    return it->second;
  };
  const std::string base = "l2_chain/" + label + "/";
  std::vector<CheckEntry> out;
  for (int k : options.degrees) {
    if (k < order || (k - order) % 2 != 0) throw ConfigError("chain degree must satisfy k >= m, k = m mod 2");
    const std::string kk = "k" + std::to_string(k);
    const double plus = at(k).first, minus_next = at(k + 2).second;
    out.push_back(identity_entry(base + "equality/" + kk, plus, minus_next, std::abs(plus - minus_next), scale,
                                 options.equality_tol));
    const double c = c_constant(2, k);
    out.push_back(inequality_entry(base + "c_bound/" + kk, at(k).second, c * plus, scale, options.inequality_tol));
    for (int l : options.lengths) {
      const double b = b_constant(2, l, k);
      out.push_back(inequality_entry(base + "b_bound/" + kk + "_l" + std::to_string(l), plus,
                                     b * at(k + 2 * l).first, scale, options.inequality_tol));
    }
  }
  return out;
}

CheckEntry check_parity(const sm::SMSamples& u, int order, double tol, const std::string& label,
                        Expectation expected) {
  const double total = sm::sm_norm(u);
  double worst = 0.0;
  for (int k = order % 2; k <= u.grid->n_alpha() / 2; k += 2) worst = std::max(worst, sm::sm_norm(sm::degree_part(u, k)));
  CheckEntry e = identity_entry("parity/" + label, worst, 0.0, worst, total, tol);
  e.expected = expected;
  return e;
}

}  // namespace xrt::verify
