#include "xrt/verify/suite.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>

#include "xrt/verify/constants.hpp"

namespace xrt::verify {

namespace {

using sm::SMGrid;
using tensor::SymmetricTensorField;

std::string spec_string(const sm::SMGridSpec& s) {
  return std::to_string(s.n_radial) + "x" + std::to_string(s.n_angular) + "x" + std::to_string(s.n_alpha);
}

std::string number(double x) {
  std::ostringstream o;
  o.precision(17);
  o << x;
  return o.str();
}

std::mt19937_64 check_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

std::string sample_label(const std::string& metric_id, int i) { return metric_id + "/u" + std::to_string(i); }

bool nonpositive_curvature(const MetricField& metric, const SMGrid& grid) {
  for (int i = 0; i < grid.n_nodes(); ++i)
    if (metric::gauss_curvature(metric, {grid.x1(i), grid.x2(i)}).value > 0.0) return false;
  return true;
}

// Lipschitz in x: a trigonometric polynomial times 1 + |x₁ − c₁| + |x₂ − c₂|/2.
sm::SMFunction lipschitz_function(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-0.5, 0.5);
  const double c1 = c(rng), c2 = c(rng);
  auto base = sm::trig_function(sm::random_trig_polynomial(rng, 2, 2, false));
  return sm::SMFunction::from_function<0>([base, c1, c2](double x1, double x2, double a) {
    return base(x1, x2, a) * (1.0 + std::abs(x1 - c1) + 0.5 * std::abs(x2 - c2));
  });
}

// (1 − |x|²) q² for a random trigonometric polynomial q.
sm::SMFunction santalo_function(std::mt19937_64& rng) {
  auto q = sm::trig_function(sm::random_trig_polynomial(rng, 2, 2, false));
  return sm::SMFunction::from_function<0>([q](double x1, double x2, double a) {
    const double v = q(x1, x2, a);
    return (1.0 - x1 * x1 - x2 * x2) * v * v;
  });
}

SymmetricTensorField trace_free_field(int order, std::mt19937_64& rng, const MetricField& metric) {
  auto f = tensor::random_polynomial_field(order, 2, rng);
  if (order < 2) return f;
  return tensor::trace_free_decompose(f, metric).front();
}

}  // namespace

void ToleranceConfig::validate() const {
  for (double t : {commutator_ad, commutator_fd, degree_ad, degree_fd, pestov, pestov_inequality, chain_equality,
                   chain_inequality, parity, friedrichs, index_form, liouville, norm_identity, constant_bound, santalo,
                   xpm_bound})
    if (!(t > 0.0)) throw ConfigError("all tolerances must be positive");
  for (const auto& g : {grid, chain_grid})
    if (g.n_radial < 1 || g.n_angular < 1 || g.n_alpha < 4 || g.n_alpha % 2 != 0)
      throw ConfigError("grid sizes must be positive with an even fiber count >= 4");
  if (fan.n_boundary < 1 || fan.n_theta < 1) throw ConfigError("fan sizes must be positive");
  if (!(geodesic.step > 0.0)) throw ConfigError("integrator step must be positive");
  if (!(chain_step > 0.0)) throw ConfigError("chain difference step must be positive");
  if (samples < 1 || bound_samples < 1 || norm_fields < 2) throw ConfigError("sample counts too small");
  if (chain_order < 1 || chain_order > 4) throw ConfigError("chain order must lie in [1, 4]");
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "commutators", "degree_commutators", "pestov",   "pestov_ineq",   "santalo",        "liouville", "friedrichs",
      "index_form",  "l2_chain",           "parity",   "norm_identity", "constant_bound", "xpm_bound"};
  return names;
}

std::vector<std::string> resolve_selection(const std::vector<std::string>& selection) {
  const auto& names = check_names();
  std::vector<bool> on(names.size(), false);
  for (const auto& s : selection) {
    if (s == "all") {
      std::fill(on.begin(), on.end(), true);
      continue;
    }
    auto it = std::find(names.begin(), names.end(), s);
    if (it == names.end()) throw ConfigError("unknown check '" + s + "'");
    on[static_cast<std::size_t>(it - names.begin())] = true;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (on[i]) out.push_back(names[i]);
  return out;
}

MetricField positive_curvature_control_metric() { return MetricField::conformal_c11(-1.0); }

sm::TrigPolynomial positive_curvature_control_function() {
  sm::TrigPolynomial p;
  p.vanish_on_boundary = true;
  p.cos_coeffs.assign(5, tensor::Polynomial::constant(0.0));
  p.sin_coeffs.assign(5, tensor::Polynomial::constant(0.0));
  p.cos_coeffs[4] = tensor::Polynomial::constant(1.0);
  return p;
}

VerificationReport run_suite(const MetricField& metric, const std::vector<std::string>& selection,
                             const ToleranceConfig& cfg) {
  cfg.validate();
  const std::vector<std::string> checks = resolve_selection(selection);
  VerificationReport report;
  const std::string id = metric.id();
  report.environment["metric"] = id;
  report.environment["grid"] = spec_string(cfg.grid);
  report.environment["chain_grid"] = spec_string(cfg.chain_grid);
  report.environment["fan"] = std::to_string(cfg.fan.n_boundary) + "x" + std::to_string(cfg.fan.n_theta) +
                              ",mu_min=" + number(cfg.fan.mu_min);
  report.environment["step"] = number(cfg.geodesic.step);
  report.environment["seed"] = std::to_string(cfg.seed);

  const auto grid = std::make_shared<const SMGrid>(metric, cfg.grid);
  const bool nonpositive = nonpositive_curvature(metric, *grid);
  report.environment["curvature"] = nonpositive ? "nonpositive on grid nodes" : "positive somewhere on grid nodes";

  std::optional<EstimateConstants> constants;
  std::optional<transform::BoundaryFan> fan;
  auto get_fan = [&]() -> const transform::BoundaryFan& {
    if (!fan) fan.emplace(metric, cfg.fan);
    return *fan;
  };
  auto diameter = [&]() {
    if (!constants) {
      constants = estimate_constants(metric, get_fan(), cfg.geodesic);
      report.environment["diameter"] = number(constants->diameter);
    }
    return constants->diameter;
  };
  std::vector<std::string> skipped;

  for (const auto& name : checks) {
    const auto index = static_cast<std::size_t>(
        std::find(check_names().begin(), check_names().end(), name) - check_names().begin());
    std::mt19937_64 rng = check_rng(cfg.seed, index);

    if (name == "commutators" || name == "degree_commutators") {
      for (int i = 0; i < cfg.samples; ++i) {
        const auto u = sm::random_trig_polynomial(rng, 3, 3, false);
        const auto w = sm::random_trig_polynomial(rng, 3, 3, false);
        for (auto mode : {Derivatives::automatic, Derivatives::finite_difference}) {
          const bool ad = mode == Derivatives::automatic;
          if (name == "commutators") {
            report.add(check_commutators(metric, u, w, grid, mode, ad ? cfg.commutator_ad : cfg.commutator_fd,
                                         sample_label(id, i)));
          } else {
            for (int k = 0; k <= 3; ++k)
              report.add(check_degree_commutators(metric, u, k, grid, mode, ad ? cfg.degree_ad : cfg.degree_fd,
                                                  sample_label(id, i)));
          }
        }
      }
    } else if (name == "pestov" || name == "pestov_ineq") {
      if (!nonpositive) {
        skipped.push_back(name);
      } else {
        for (int i = 0; i < cfg.samples; ++i) {
          const auto u = sm::random_trig_polynomial(rng, 3, 3, true);
          if (name == "pestov") report.add(check_pestov(metric, u, grid, cfg.pestov, sample_label(id, i)));
          else report.add(check_pestov_inequality(metric, u, grid, cfg.pestov_inequality, sample_label(id, i)));
        }
      }
      if (name == "pestov_ineq") {
        const MetricField control = positive_curvature_control_metric();
        const auto cgrid = std::make_shared<const SMGrid>(control, cfg.grid);
        report.add(check_pestov_inequality(control, positive_curvature_control_function(), cgrid,
                                           cfg.pestov_inequality, control.id() + "/control", Expectation::fail));
      }
    } else if (name == "santalo") {
      std::vector<sm::SMFunction> F;
      std::vector<std::string> labels;
      for (int i = 0; i < cfg.samples; ++i) {
        F.push_back(santalo_function(rng));
        labels.push_back(sample_label(id, i));
      }
      report.add(check_santalo(metric, F, labels, grid, get_fan(), cfg.geodesic, cfg.santalo));
    } else if (name == "liouville") {
      report.add(check_liouville(metric, sm::SMFunction::constant(1.0), grid, cfg.liouville, id + "/one"));
      for (int i = 0; i < cfg.samples; ++i)
        report.add(check_liouville(metric, lipschitz_function(rng), grid, cfg.liouville, sample_label(id, i)));
    } else if (name == "friedrichs" || name == "index_form") {
      if (name == "index_form" && !nonpositive) {
        skipped.push_back(name);
        continue;
      }
      const double d = diameter();
      for (int i = 0; i < cfg.bound_samples; ++i) {
        const auto u = sm::random_trig_polynomial(rng, 3, 3, true);
        const auto w = sm::random_trig_polynomial(rng, 3, 3, true);
        if (name == "friedrichs") report.add(check_friedrichs(metric, u, w, d, grid, cfg.friedrichs, sample_label(id, i)));
        else report.add(check_index_form(metric, w, d, grid, cfg.index_form, sample_label(id, i)));
      }
    } else if (name == "l2_chain" || name == "parity") {
      const int m = cfg.chain_order;
      const auto cgrid = std::make_shared<const SMGrid>(metric, cfg.chain_grid);
      const auto f = tensor::sym_cov_derivative(tensor::random_potential(m - 1, 3, rng), metric);
      const auto uf = transform::integral_function_sm(f, metric, cfg.geodesic);
      const std::string label = id + "/m" + std::to_string(m);
      if (name == "l2_chain") {
        if (!nonpositive) {
          skipped.push_back(name);
          continue;
        }
        const TransportStencil stencil(uf, metric, cgrid, cfg.chain_step);
        const auto lam = sm::sample(sm::lambda_function(f, metric), cgrid);
        ChainOptions opts;
        opts.degrees = {m, m + 2};
        opts.equality_tol = cfg.chain_equality;
        opts.inequality_tol = cfg.chain_inequality;
        report.add(check_l2_chain(stencil, m, sm::sm_inner(lam, lam), opts, label));
      } else {
        report.add(check_parity(sm::sample(uf, cgrid), m, cfg.parity, label + "/potential"));
        // If ≠ 0 for a generic field, so the parity of u^f is broken.
        const auto generic = tensor::random_polynomial_field(m, 2, rng);
        report.add(check_parity(sm::sample(transform::integral_function_sm(generic, metric, cfg.geodesic), cgrid), m,
                                cfg.parity, label + "/generic", Expectation::fail));
      }
    } else if (name == "norm_identity") {
      for (int m = 0; m <= 4; ++m) {
        std::vector<SymmetricTensorField> fields;
        for (int i = 0; i < cfg.norm_fields; ++i) fields.push_back(trace_free_field(m, rng, metric));
        report.add(check_norm_identity(metric, fields, grid, cfg.norm_identity, id + "/m" + std::to_string(m)));
      }
    } else if (name == "constant_bound") {
      report.add(check_constant_bound(12, 40, cfg.constant_bound));
    } else if (name == "xpm_bound") {
      for (int i = 0; i < cfg.samples; ++i)
        report.add(check_xpm_bound(metric, sm::random_trig_polynomial(rng, 6, 2, true), grid, cfg.xpm_bound,
                                   sample_label(id, i)));
    }
  }
  if (!skipped.empty()) {
    std::string s;
    for (const auto& n : skipped) s += (s.empty() ? "" : ",") + n;
    report.environment["skipped_positive_curvature"] = s;
  }
  return report;
}

}  // namespace xrt::verify
