#include "xrt/verify/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "xrt/verify/constants.hpp"

namespace xrt::verify {

namespace {

using sm::SMSamples;

SMSamples values(const TrigPolynomial& p, const GridPtr& g) { return sm::sample(sm::trig_function(p), g); }

SMSamples flow(const MetricField& m, const TrigPolynomial& p, const GridPtr& g, Derivatives mode) {
  return sm::sample(sm::x_scalar(sm::trig_function(p), m, mode), g);
}

SMSamples horizontal(const MetricField& m, const TrigPolynomial& p, const GridPtr& g, Derivatives mode) {
  return sm::sample(sm::h_scalar(sm::trig_function(p), m, mode), g);
}

double sq(const SMSamples& s) { return sm::sm_inner(s, s); }

SMSamples scaled(double c, const SMSamples& s) {
  SMSamples out = s;
  for (double& v : out.values) v *= c;
  return out;
}

std::vector<double> node_curvature(const MetricField& m, const SMGrid& g) {
  std::vector<double> k(g.n_nodes());
  for (int i = 0; i < g.n_nodes(); ++i) k[i] = metric::gauss_curvature(m, {g.x1(i), g.x2(i)}).value;
  return k;
}

CheckEntry norm_entry(std::string name, const SMSamples& a, const SMSamples& b, double u_norm, double tol) {
  const double na = sm::sm_norm(a), nb = sm::sm_norm(b);
  return identity_entry(std::move(name), na, nb, sm::sm_norm(sm::combine(1.0, a, -1.0, b)),
                        std::max({na, nb, u_norm}), tol);
}

std::string mode_name(Derivatives mode) { return mode == Derivatives::automatic ? "ad" : "fd"; }

double det_g(const MetricField& m, const Vec2<double>& x) { return det(m.g(x)); }

// ∂_{x^i}(v^i |g|) and ∂_{v^i}(Γ^i_{jk} v^j v^k |g|) for i = 0, 1.
std::array<std::array<double, 2>, 2> liouville_terms(const MetricField& m, const Vec2<double>& x,
                                                     const Vec2<double>& v, double h) {
  std::array<std::array<double, 2>, 2> t{};
  const double dg = det_g(m, x);
  const auto gam = m.christoffel(x);
  auto spray = [&](int i, const Vec2<double>& w) {
    double s = 0.0;
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) s += gam[i][j][k] * w[j] * w[k];
    return s * dg;
  };
  for (int i = 0; i < 2; ++i) {
    Vec2<double> xp = x, xm = x, vp = v, vm = v;
    xp[i] += h;
    xm[i] -= h;
    vp[i] += h;
    vm[i] -= h;
    t[0][i] = v[i] * (det_g(m, xp) - det_g(m, xm)) / (2.0 * h);
    t[1][i] = (spray(i, vp) - spray(i, vm)) / (2.0 * h);
  }
  return t;
}

}  // namespace

std::vector<CheckEntry> check_commutators(const MetricField& metric, const TrigPolynomial& u,
                                          const TrigPolynomial& w, const GridPtr& grid, Derivatives mode,
                                          double tol, const std::string& label) {
  const std::string base = "commutators/" + mode_name(mode) + "/" + label + "/";
  const double un = sm::sm_norm(values(u, grid)), wn = sm::sm_norm(values(w, grid));
  const SMSamples xu = flow(metric, u, grid, mode), hu = horizontal(metric, u, grid, mode);
  const TrigPolynomial vu = sm::trig_vertical(u);
  std::vector<CheckEntry> out;

  out.push_back(norm_entry(base + "x_grad_v", sm::combine(1.0, flow(metric, vu, grid, mode), -1.0, sm::vertical(xu)),
                           scaled(-1.0, hu), un, tol));
  out.push_back(norm_entry(base + "div_h_grad_v",
                           sm::combine(1.0, horizontal(metric, vu, grid, mode), -1.0, sm::vertical(hu)), xu, un, tol));
  out.push_back(norm_entry(
      base + "x_laplacian",
      sm::combine(1.0, flow(metric, sm::trig_vertical_laplacian(u), grid, mode), -1.0, sm::vertical_laplacian(xu)),
      sm::combine(2.0, sm::vertical(hu), 1.0, xu), un, tol));

  const SMSamples xw = flow(metric, w, grid, mode), hw = horizontal(metric, w, grid, mode);
  out.push_back(norm_entry(base + "x_div_v",
                           sm::combine(1.0, flow(metric, sm::trig_vertical(w), grid, mode), -1.0, sm::vertical(xw)),
                           scaled(-1.0, hw), wn, tol));
  return out;
}

std::vector<CheckEntry> check_degree_commutators(const MetricField& metric, const TrigPolynomial& u, int k,
                                                 const GridPtr& grid, Derivatives mode, double tol,
                                                 const std::string& label) {
  const std::string base = "degree_commutators/" + mode_name(mode) + "/" + label + "/k" + std::to_string(k) + "/";
  const TrigPolynomial uk = sm::trig_degree_part(u, k);
  const double un = sm::sm_norm(values(uk, grid));
  const auto a = sm::x_plus_minus(sm::trig_function(uk), k, metric, grid, mode);
  const auto b = sm::x_plus_minus(sm::trig_function(sm::trig_vertical_laplacian(uk)), k, metric, grid, mode);
  const double kk = static_cast<double>(k);
  std::vector<CheckEntry> out;
  out.push_back(norm_entry(base + "plus", sm::combine(1.0, b.plus, -1.0, sm::vertical_laplacian(a.plus)),
                           scaled(-(2.0 * kk + 1.0), a.plus), un, tol));
  out.push_back(norm_entry(base + "minus", sm::combine(1.0, b.minus, -1.0, sm::vertical_laplacian(a.minus)),
                           scaled(2.0 * kk - 1.0, a.minus), un, tol));
  return out;
}

CheckEntry check_pestov(const MetricField& metric, const TrigPolynomial& u, const GridPtr& grid, double tol,
                        const std::string& label) {
  const TrigPolynomial vu = sm::trig_vertical(u);
  const SMSamples xu = flow(metric, u, grid, Derivatives::automatic);
  const double lhs = sq(sm::vertical(xu));
  const SMSamples vus = values(vu, grid);
  const double rhs = sq(flow(metric, vu, grid, Derivatives::automatic)) -
                     sm::sm_weighted_inner(node_curvature(metric, *grid), vus, vus) + sq(xu);
  return identity_entry("pestov/" + label, lhs, rhs, std::abs(lhs - rhs), std::max(std::abs(lhs), std::abs(rhs)),
                        tol);
}

CheckEntry check_pestov_inequality(const MetricField& metric, const TrigPolynomial& u, const GridPtr& grid,
                                   double tol, const std::string& label, Expectation expected) {
  const SMSamples xu = flow(metric, u, grid, Derivatives::automatic);
  const SMSamples comm = sm::combine(1.0, flow(metric, sm::trig_vertical_laplacian(u), grid, Derivatives::automatic),
                                     -1.0, sm::vertical_laplacian(xu));
  CheckEntry e = inequality_entry("pestov_ineq/" + label, sm::sm_inner(xu, comm), 0.0, sq(xu), tol);
  e.expected = expected;
  return e;
}

std::vector<CheckEntry> check_friedrichs(const MetricField& metric, const TrigPolynomial& u,
                                         const TrigPolynomial& w, double diameter, const GridPtr& grid, double tol,
                                         const std::string& label) {
  const double d2 = diameter * diameter;
  std::vector<CheckEntry> out;
  for (const auto& [name, p] : {std::pair{std::string("function"), &u}, std::pair{std::string("section"), &w}}) {
    const double n2 = sq(values(*p, grid));
    const double x2 = sq(flow(metric, *p, grid, Derivatives::automatic));
    out.push_back(inequality_entry("friedrichs/" + label + "/" + name, n2, d2 * x2, n2, tol));
  }
  return out;
}

CheckEntry check_index_form(const MetricField& metric, const TrigPolynomial& w, double diameter,
                            const GridPtr& grid, double tol, const std::string& label) {
  const SMSamples ws = values(w, grid);
  const double n2 = sq(ws);
  const double q = sq(flow(metric, w, grid, Derivatives::automatic)) -
                   sm::sm_weighted_inner(node_curvature(metric, *grid), ws, ws);
  return inequality_entry("index_form/" + label, n2 / (diameter * diameter), q, n2, tol);
}

CheckEntry check_xpm_bound(const MetricField& metric, const TrigPolynomial& u, const GridPtr& grid, double tol,
                           const std::string& label) {
  double lhs = 0.0;
  for (int k = 0; k < static_cast<int>(u.cos_coeffs.size()); ++k) {
    const auto s = sm::x_plus_minus(sm::trig_function(sm::trig_degree_part(u, k)), k, metric, grid);
    lhs += sq(s.plus) + sq(s.minus);
  }
  const double rhs = sq(flow(metric, u, grid, Derivatives::automatic)) +
                     sq(horizontal(metric, u, grid, Derivatives::automatic));
  return inequality_entry("xpm_bound/" + label, lhs, rhs, rhs, tol);
}

double liouville_density(const MetricField& metric, const Vec2<double>& x, const Vec2<double>& v, double h) {
  const auto t = liouville_terms(metric, x, v, h);
  return (t[0][0] - t[1][0]) + (t[0][1] - t[1][1]);
}

double liouville_density_alternating(const MetricField& metric, const Vec2<double>& x, const Vec2<double>& v,
                                     double h) {
  const auto t = liouville_terms(metric, x, v, h);
  return (t[0][0] - t[1][0]) - (t[0][1] - t[1][1]);
}

CheckEntry check_liouville(const MetricField& metric, const sm::SMFunction& u, const GridPtr& grid, double tol,
                           const std::string& label) {
  const SMGrid& g = *grid;
  const SMSamples us = sm::sample(u, grid);
  double integral = 0.0, l1 = 0.0;
  for (int node = 0; node < g.n_nodes(); ++node) {
    const Vec2<double> x{g.x1(node), g.x2(node)};
    const Mat2<double> gx = metric.g(x);
    double s = 0.0, a = 0.0;
    for (int k = 0; k < g.n_alpha(); ++k) {
      const double val = us.at(node, k);
      s += val * liouville_density(metric, x, metric::fiber_vector(gx, g.alpha(k)));
      a += std::abs(val);
    }
    integral += g.area_weight(node) * s;
    l1 += g.area_weight(node) * a;
  }
  integral *= g.alpha_weight();
  l1 *= g.alpha_weight();
  return identity_entry("liouville/" + label, std::abs(integral), l1, std::abs(integral), l1, tol);
}

NormIdentityResult norm_ratios(const MetricField& metric, const std::vector<tensor::SymmetricTensorField>& fields,
                               const GridPtr& grid) {
  NormIdentityResult r;
  const tensor::DiskQuadrature disk{grid->spec().n_radial, grid->spec().n_angular};
  for (const auto& f : fields) {
    const double lam = sm::sm_norm(sm::sample(sm::lambda_function(f, metric), grid));
    r.ratios.push_back(lam / std::sqrt(tensor::l2_inner_tensor(f, f, metric, disk)));
  }
  if (r.ratios.empty()) return r;
  const auto [lo, hi] = std::minmax_element(r.ratios.begin(), r.ratios.end());
  for (double x : r.ratios) r.mean += x;
  r.mean /= static_cast<double>(r.ratios.size());
  r.spread = (*hi - *lo) / r.mean;
  return r;
}

CheckEntry check_norm_identity(const MetricField& metric, const std::vector<tensor::SymmetricTensorField>& fields,
                               const GridPtr& grid, double tol, const std::string& label) {
  const NormIdentityResult r = norm_ratios(metric, fields, grid);
  const auto [lo, hi] = std::minmax_element(r.ratios.begin(), r.ratios.end());
  CheckEntry e = identity_entry("norm_identity/" + label, *hi, *lo, *hi - *lo, r.mean, tol);
  std::ostringstream note;
  note.precision(12);
  note << "measured constant squared " << r.mean * r.mean;
  e.note = note.str();
  return e;
}

CheckEntry check_constant_bound(int k_max, int l_max, double tol) {
  const ConstantBoundSweep s = constant_bound_sweep(2, 4, k_max, l_max);
  CheckEntry e = identity_entry("constant_bound/n2-4_k" + std::to_string(k_max) + "_l" + std::to_string(l_max),
                                s.min_ratio, 1.0, s.violations > 0 ? std::max(1.0 - s.min_ratio, 1e-300) : 0.0, 1.0,
                                tol);
  e.note = std::to_string(s.cases) + " cases, " + std::to_string(s.violations) + " violations";
  return e;
}

std::vector<CheckEntry> check_santalo(const MetricField& metric, const std::vector<sm::SMFunction>& F,
                                      const std::vector<std::string>& labels, const GridPtr& grid,
                                      const transform::BoundaryFan& fan, const metric::GeodesicOptions& options,
                                      double tol) {
  const auto fan_values = transform::santalo_integrals(F, metric, fan, options);
  const SMSamples one = sm::sample(sm::SMFunction::constant(1.0), grid);
  std::vector<CheckEntry> out;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double direct = sm::sm_inner(sm::sample(F[i], grid), one);
    const double via_fan = fan_values[i].value;
    CheckEntry e = identity_entry("santalo/" + labels[i], direct, via_fan, std::abs(direct - via_fan),
                                  std::max(std::abs(direct), std::abs(via_fan)), tol);
    std::ostringstream note;
    note << "grazing cutoff estimate " << fan_values[i].cutoff_estimate;
    e.note = note.str();
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace xrt::verify
