#include <doctest.h>

#include <cmath>
#include <numbers>

#include "xrt/verify/constants.hpp"
#include "xrt/verify/suite.hpp"

using namespace xrt;
using namespace xrt::verify;
using sm::SMGridSpec;

namespace {

constexpr double kPi = std::numbers::pi;

GridPtr make_grid(const MetricField& m, SMGridSpec s = {12, 24, 32}) { return std::make_shared<const sm::SMGrid>(m, s); }

sm::TrigPolynomial single_mode(int k, tensor::Polynomial coeff, bool vanish, bool sine = false) {
  sm::TrigPolynomial p;
  p.vanish_on_boundary = vanish;
  p.cos_coeffs.assign(k + 1, tensor::Polynomial::constant(0.0));
  p.sin_coeffs.assign(k + 1, tensor::Polynomial::constant(0.0));
  (sine ? p.sin_coeffs : p.cos_coeffs)[k] = coeff;
  return p;
}

const sm::TrigPolynomial kZero = single_mode(0, tensor::Polynomial::constant(0.0), false);
const sm::TrigPolynomial kOne = single_mode(0, tensor::Polynomial::constant(1.0), false);

}  // namespace

TEST_CASE("entry verdicts") {
  auto e = identity_entry("a", 1.0, 1.0, 0.0, 0.0, 1e-9);
  CHECK(e.residual == 0.0);
  CHECK(e.passed());
  CHECK(!identity_entry("b", 1.0, 0.0, 1.0, 0.0, 1e-9).passed());
  CHECK(identity_entry("c", 2.0, 1.0, 1.0, 4.0, 0.3).passed());
  CHECK(!identity_entry("d", 2.0, 1.0, 1.0, 4.0, 0.2).passed());
  CHECK(inequality_entry("e", 1.0, 2.0, 1.0, 1e-12).residual == 0.0);
  CHECK(inequality_entry("f", 2.0, 1.0, 2.0, 1e-12).residual == doctest::Approx(0.5));
  CheckEntry nan = identity_entry("g", 0.0, 0.0, NAN, 1.0, 1.0);
  CHECK(!nan.passed());
  CheckEntry control = inequality_entry("h", 1.0, 0.0, 1.0, 1e-6);
  control.expected = Expectation::fail;
  CHECK(control.as_expected());

  VerificationReport r;
  r.add(e);
  r.add(control);
  r.add(nan);
  CHECK(r.unexpected() == 1);
  auto j = r.to_json();
  REQUIRE(j["checks"].size() == 3);
  CHECK(j["checks"][1]["verdict"] == "fail");
  CHECK(j["checks"][1]["expected"] == "fail");
  CHECK(j["checks"][2]["residual"].is_null());
  for (const char* key : {"name", "lhs", "rhs", "residual", "tol", "verdict", "expected"})
    CHECK(j["checks"][0].contains(key));
  CHECK(r.table().find("1 unexpected") != std::string::npos);
}

TEST_CASE("chain constants") {
  CHECK(c_constant_exact(2, 1) == Rational(3, 1));
  CHECK(c_constant_exact(2, 4) == Rational(9, 7));
  CHECK(b_constant_exact(2, 1, 2) == Rational(9, 7));
  CHECK(b_constant_exact(2, 2, 2) == Rational(9, 7) * Rational(13, 11));
  CHECK(b_constant_exact(3, 0, 5) == 1);
  for (int n = 2; n <= 4; ++n)
    for (int k = 0; k <= 12; ++k)
      if (2 * k + n - 3 > 0) CHECK(c_constant(n, k) > 1.0);
  CHECK_THROWS_AS(c_constant_exact(2, 0), ConfigError);
  // n = 2, k = 2, l = 1: B^{-1} = 7/9 ≥ √(3/7).
  CHECK(1.0 / b_constant(2, 1, 2) == doctest::Approx(7.0 / 9.0).epsilon(1e-15));
  CHECK(1.0 / b_constant(2, 1, 2) >= std::sqrt(3.0 / 7.0));
  // l = 0 on both sides.
  auto one = constant_bound_sweep(2, 2, 1, 0);
  CHECK(one.cases == 1);
  CHECK(one.min_ratio == 1.0);
  auto sweep = constant_bound_sweep(2, 4, 12, 40);
  CHECK(sweep.violations == 0);
  // n = 2, 3 need k ≥ 1; n = 4 admits k = 0.
  CHECK(sweep.cases == (12 + 12 + 13) * 41);
  CHECK(check_constant_bound(12, 40, 1e-12).passed());
}

TEST_CASE("fan diameter") {
  auto flat = MetricField::euclidean();
  transform::BoundaryFan fan(flat, {32, 8, 1e-3});
  auto c = estimate_constants(flat, fan);
  CHECK(c.diameter == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(c.epsilon() == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("commutator checks") {
  auto flat = MetricField::euclidean();
  auto g = make_grid(flat);
  auto x1cos = single_mode(1, tensor::Polynomial::monomial(1.0, 1, 0), false);
  for (auto mode : {Derivatives::automatic, Derivatives::finite_difference})
    for (const auto& e : check_commutators(flat, x1cos, x1cos, g, mode, 1e-8, "x1cos")) CHECK(e.passed());
  for (const auto& e : check_commutators(flat, kOne, kOne, g, Derivatives::automatic, 1e-8, "one")) {
    CHECK(e.lhs == 0.0);
    CHECK(e.rhs == 0.0);
    CHECK(e.residual == 0.0);
  }
  std::mt19937_64 rng(3);
  auto c11 = MetricField::conformal_c11(0.25);
  auto gc = make_grid(c11);
  auto u = sm::random_trig_polynomial(rng, 3, 3, false), w = sm::random_trig_polynomial(rng, 3, 3, false);
  for (const auto& e : check_commutators(c11, u, w, gc, Derivatives::finite_difference, 1e-4, "fd")) {
    CHECK(e.passed());
    CHECK(e.lhs > 0.0);
  }
  auto hyp = MetricField::hyperbolic_like(0.5);
  for (const auto& e : check_commutators(hyp, u, w, make_grid(hyp), Derivatives::automatic, 1e-6, "ad"))
    CHECK(e.residual <= 1e-12);
}

TEST_CASE("degree commutator factors") {
  auto hyp = MetricField::hyperbolic_like(0.5);
  auto g = make_grid(hyp);
  std::mt19937_64 rng(5);
  auto u = sm::random_trig_polynomial(rng, 3, 3, false);
  for (int k = 0; k <= 3; ++k)
    for (const auto& e : check_degree_commutators(hyp, u, k, g, Derivatives::automatic, 1e-8, "rand"))
      CHECK(e.passed());
  // m = 2: X₊(Δv u₂) − Δv(X₊u₂) = −5 X₊u₂, assembled directly.
  auto u2 = sm::trig_degree_part(u, 2);
  auto a = sm::x_plus_minus(sm::trig_function(u2), 2, hyp, g);
  auto b = sm::x_plus_minus(sm::trig_function(sm::trig_vertical_laplacian(u2)), 2, hyp, g);
  auto lhs = sm::combine(1.0, b.plus, -1.0, sm::vertical_laplacian(a.plus));
  CHECK(sm::sm_norm(sm::combine(1.0, lhs, 5.0, a.plus)) <= 1e-10 * sm::sm_norm(a.plus));
  // m = 0: factor −1, and X₋u₀ = 0.
  auto e0 = check_degree_commutators(hyp, u, 0, g, Derivatives::automatic, 1e-8, "rand");
  CHECK(e0[0].lhs == doctest::Approx(e0[0].rhs).epsilon(1e-10));
  CHECK(e0[1].lhs == 0.0);
}

TEST_CASE("Pestov identity") {
  auto flat = MetricField::euclidean();
  auto g = make_grid(flat);
  CHECK(check_pestov(flat, kZero, g, 1e-3, "zero").residual == 0.0);
  auto bump_cos = single_mode(1, tensor::Polynomial::constant(1.0), true);
  auto e = check_pestov(flat, bump_cos, g, 1e-3, "bump");
  CHECK(e.passed());
  CHECK(e.lhs > 0.0);
  std::mt19937_64 rng(7);
  auto hyp = MetricField::hyperbolic_like(0.5);
  auto gh = make_grid(hyp);
  auto u = sm::random_trig_polynomial(rng, 3, 3, true);
  CHECK(check_pestov(hyp, u, gh, 1e-3, "rand").passed());
  // The curvature term is active: dropping it breaks the balance.
  auto vu = sm::sample(sm::trig_function(sm::trig_vertical(u)), gh);
  std::vector<double> k(gh->n_nodes());
  for (int i = 0; i < gh->n_nodes(); ++i) k[i] = metric::gauss_curvature(hyp, {gh->x1(i), gh->x2(i)}).value;
  CHECK(std::abs(sm::sm_weighted_inner(k, vu, vu)) > 1e-2 * e.lhs);
}

TEST_CASE("Pestov inequality and its positive-curvature control") {
  auto flat = MetricField::euclidean();
  auto g = make_grid(flat);
  CHECK(check_pestov_inequality(flat, kZero, g, 1e-6, "zero").residual == 0.0);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    auto e = check_pestov_inequality(flat, sm::random_trig_polynomial(rng, 3, 3, true), g, 1e-6, "rand");
    CHECK(e.passed());
    CHECK(e.lhs < 0.0);
  }
  auto control = positive_curvature_control_metric();
  auto e = check_pestov_inequality(control, positive_curvature_control_function(), make_grid(control), 1e-6,
                                   "control", Expectation::fail);
  CHECK(!e.passed());
  CHECK(e.as_expected());
  CHECK(e.lhs > 0.0);
}

TEST_CASE("Friedrichs and index form") {
  auto flat = MetricField::euclidean();
  auto g = make_grid(flat);
  auto bump = single_mode(0, tensor::Polynomial::constant(1.0), true);
  // ‖1 − |x|²‖² over SM = 2π · π/3.
  CHECK(sm::sm_inner(sm::sample(sm::trig_function(bump), g), sm::sample(sm::trig_function(bump), g)) ==
        doctest::Approx(2 * kPi * kPi / 3).epsilon(1e-12));
  for (const auto& e : check_friedrichs(flat, bump, bump, 2.0, g, 1e-6, "bump")) {
    CHECK(e.passed());
    CHECK(e.rhs > e.lhs);
  }
  for (const auto& e : check_friedrichs(flat, kZero, kZero, 2.0, g, 1e-6, "zero")) CHECK(e.residual == 0.0);
  // Too small a diameter makes the bound fail.
  CHECK(!check_friedrichs(flat, bump, bump, 0.5, g, 1e-6, "short")[0].passed());

  std::mt19937_64 rng(13);
  auto hyp = MetricField::hyperbolic_like(0.5);
  auto gh = make_grid(hyp);
  for (int i = 0; i < 3; ++i) {
    auto w = sm::random_trig_polynomial(rng, 3, 3, true);
    auto e = check_index_form(hyp, w, 2.2, gh, 1e-6, "rand");
    CHECK(e.passed());
    // K < 0 adds to ‖XW‖².
    auto xw = sm::sample(sm::x_scalar(sm::trig_function(w), hyp), gh);
    CHECK(e.rhs > sm::sm_inner(xw, xw));
  }
  CHECK(check_index_form(flat, kZero, 2.0, g, 1e-6, "zero").residual == 0.0);
}

TEST_CASE("X plus minus bound") {
  std::mt19937_64 rng(17);
  for (const auto& m : {MetricField::euclidean(), MetricField::conformal_c11(0.25)}) {
    auto e = check_xpm_bound(m, sm::random_trig_polynomial(rng, 6, 2, true), make_grid(m), 1e-6, "rand");
    CHECK(e.passed());
    CHECK(e.lhs > 0.0);
  }
  auto flat = MetricField::euclidean();
  CHECK(check_xpm_bound(flat, kZero, make_grid(flat), 1e-6, "zero").residual == 0.0);
}

TEST_CASE("flow divergence densities") {
  auto flat = MetricField::euclidean();
  for (double a : {0.0, 1.0, 2.5})
    CHECK(liouville_density(flat, {0.3, -0.2}, {std::cos(a), std::sin(a)}) == 0.0);
  // Conformal g = e^{2φ}δ: the divergence vanishes and the alternating form
  // equals 4|g|(v¹∂₁φ − v²∂₂φ).
  for (const auto& m : {MetricField::conformal_c11(0.25), MetricField::hyperbolic_like(0.5)})
    for (Vec2<double> x : {Vec2<double>{0.4, 0.3}, Vec2<double>{-0.5, 0.6}, Vec2<double>{0.7, -0.1}})
      for (double a : {0.3, 1.9, 4.0}) {
        const Vec2<double> v = metric::fiber_vector(m.g(x), a);
        const metric::ConformalJet<double> jet = std::visit(
            [&](const auto& fam) -> metric::ConformalJet<double> {
              using F = std::decay_t<decltype(fam)>;
              if constexpr (std::is_same_v<F, metric::HyperbolicLike> || std::is_same_v<F, metric::ConformalC11>)
                return metric::conformal_jet(fam, x);
              else
                return {};
            },
            m.family());
        const double detg = std::exp(4.0 * jet.phi);
        const double expected = 4.0 * detg * (v[0] * jet.grad[0] - v[1] * jet.grad[1]);
        CHECK(std::abs(liouville_density(m, x, v)) <= 1e-7 * detg);
        CHECK(liouville_density_alternating(m, x, v) == doctest::Approx(expected).epsilon(1e-7));
      }
  // The alternating form is not identically zero.
  auto c11 = MetricField::conformal_c11(0.25);
  Vec2<double> x{0.5, 0.1};
  CHECK(std::abs(liouville_density_alternating(c11, x, metric::fiber_vector(c11.g(x), 0.2))) > 0.1);
}

TEST_CASE("Liouville check") {
  auto flat = MetricField::euclidean();
  std::mt19937_64 rng(19);
  auto u = sm::trig_function(sm::random_trig_polynomial(rng, 2, 2, false));
  CHECK(check_liouville(flat, u, make_grid(flat), 1e-12, "rand").residual == 0.0);
  auto c11 = MetricField::conformal_c11(0.25);
  auto gc = make_grid(c11);
  CHECK(check_liouville(c11, sm::SMFunction::constant(1.0), gc, 1e-3, "one").passed());
  CHECK(check_liouville(c11, u, gc, 1e-3, "rand").passed());
}

TEST_CASE("norm identity") {
  std::mt19937_64 rng(23);
  auto flat = MetricField::euclidean();
  auto g = make_grid(flat);
  auto f0 = tensor::random_polynomial_field(0, 2, rng);
  CHECK(std::pow(norm_ratios(flat, {f0}, g).mean, 2) == doctest::Approx(2 * kPi).epsilon(1e-10));
  auto f1 = tensor::random_polynomial_field(1, 2, rng);
  CHECK(std::pow(norm_ratios(flat, {f1}, g).mean, 2) == doctest::Approx(kPi).epsilon(1e-10));
  auto hyp = MetricField::hyperbolic_like(0.5);
  auto gh = make_grid(hyp);
  std::vector<tensor::SymmetricTensorField> two;
  for (int i = 0; i < 2; ++i)
    two.push_back(tensor::trace_free_decompose(tensor::random_polynomial_field(2, 2, rng), hyp).front());
  auto r = norm_ratios(hyp, two, gh);
  CHECK(r.spread <= 1e-6);
  CHECK(check_norm_identity(hyp, two, gh, 1e-6, "m2").passed());
  // A field with a trace part breaks the constancy.
  two.push_back(tensor::random_polynomial_field(2, 2, rng));
  CHECK(!check_norm_identity(hyp, two, gh, 1e-6, "m2").passed());
}

TEST_CASE("transport stencil reproduces the flow derivative") {
  // Analytic u = −λp against its stencil differences.
  std::mt19937_64 rng(29);
  auto hyp = MetricField::hyperbolic_like(0.5);
  auto g = make_grid(hyp, {6, 12, 16});
  auto p = tensor::random_potential(1, 3, rng);
  auto u = sm::lambda_function(p.scaled(-1.0), hyp);
  TransportStencil stencil(u, hyp, g, 1e-4);
  for (int k = 0; k <= 3; ++k) {
    auto a = stencil.x_split(k);
    auto b = sm::x_plus_minus(sm::degree_component(u, k), k, hyp, g);
    const double scale = std::max(1.0, sm::sm_norm(b.plus));
    CHECK(sm::sm_norm(sm::combine(1.0, a.plus, -1.0, b.plus)) <= 1e-6 * scale);
    CHECK(sm::sm_norm(sm::combine(1.0, a.minus, -1.0, b.minus)) <= 1e-6 * scale);
  }
  CHECK_THROWS_AS(stencil.x_split(7), ResolutionTooLow);
  CHECK_THROWS_AS(TransportStencil(u, hyp, g, 0.5), ConfigError);
}

TEST_CASE("degree chain of an integral function") {
  std::mt19937_64 rng(31);
  auto hyp = MetricField::hyperbolic_like(0.5);
  auto g = make_grid(hyp, {6, 12, 32});
  auto f = tensor::sym_cov_derivative(tensor::random_potential(1, 3, rng), hyp);
  TransportStencil stencil(transform::integral_function_sm(f, hyp), hyp, g, 1e-4);
  auto lam = sm::sample(sm::lambda_function(f, hyp), g);
  const double scale = sm::sm_inner(lam, lam);
  // Degree 2 of Xu = −λf: X₊u₁ + X₋u₃ = −(λf)₂ with u₃ = 0.
  auto s1 = stencil.x_split(1);
  CHECK(sm::sm_norm(sm::combine(1.0, s1.plus, 1.0, sm::degree_part(lam, 2))) <= 1e-4 * std::sqrt(scale));
  for (const auto& e : check_l2_chain(stencil, 2, scale, {}, "hyp")) CHECK(e.passed());
  CHECK_THROWS_AS(check_l2_chain(stencil, 2, scale, {{3}, {1}, 2e-3, 1e-6}, "hyp"), ConfigError);
  CHECK(check_parity(stencil.center(), 2, 1e-4, "potential").passed());

  auto generic = tensor::random_polynomial_field(2, 2, rng);
  auto ug = sm::sample(transform::integral_function_sm(generic, hyp), g);
  auto control = check_parity(ug, 2, 1e-4, "generic", Expectation::fail);
  CHECK(!control.passed());
  CHECK(control.as_expected());

  TransportStencil zero(transform::integral_function_sm(tensor::SymmetricTensorField::zero(2), hyp), hyp, g, 1e-4);
  for (const auto& e : check_l2_chain(zero, 2, 0.0, {}, "zero")) {
    CHECK(e.lhs == 0.0);
    CHECK(e.rhs == 0.0);
    CHECK(e.passed());
  }
  CHECK(check_parity(zero.center(), 2, 1e-4, "zero").residual == 0.0);
}

TEST_CASE("Santalo check") {
  auto hyp = MetricField::hyperbolic_like(0.5);
  transform::BoundaryFan fan(hyp, {48, 16, 1e-3});
  auto bump = sm::SMFunction::from_function<0>([](double x1, double x2, double) { return 1.0 - x1 * x1 - x2 * x2; });
  auto entries = check_santalo(hyp, {bump}, {"bump"}, make_grid(hyp, {16, 32, 8}), fan, {}, 1e-3);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].passed());
  CHECK(entries[0].lhs > 0.0);
}

TEST_CASE("suite selection and configuration") {
  CHECK(resolve_selection({"all"}) == check_names());
  CHECK(resolve_selection({"parity", "pestov", "parity"}) == std::vector<std::string>{"pestov", "parity"});
  CHECK_THROWS_AS(resolve_selection({"pestov", "nonsense"}), ConfigError);
  ToleranceConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.pestov = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.grid.n_alpha = 31;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("suite reports are reproducible") {
  ToleranceConfig cfg;
  cfg.grid = {8, 16, 16};
  cfg.samples = 2;
  auto m = MetricField::hyperbolic_like(0.5);
  auto a = run_suite(m, {"pestov_ineq", "liouville", "constant_bound"}, cfg);
  auto b = run_suite(m, {"constant_bound", "pestov_ineq", "liouville"}, cfg);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.all_as_expected());
  CHECK(a.environment.at("seed") == "1");
  // One control, recorded as an expected failure.
  int controls = 0;
  for (const auto& e : a.entries) controls += e.expected == Expectation::fail ? 1 : 0;
  CHECK(controls == 1);
  // Inputs of a check do not depend on the rest of the selection.
  auto c = run_suite(m, {"liouville"}, cfg);
  for (const auto& e : c.entries) {
    auto it = std::find_if(a.entries.begin(), a.entries.end(), [&](const CheckEntry& x) { return x.name == e.name; });
    REQUIRE(it != a.entries.end());
    CHECK(it->residual == e.residual);
  }
  cfg.seed = 2;
  auto d = run_suite(m, {"liouville"}, cfg);
  CHECK(d.entries[1].lhs != c.entries[1].lhs);
  // Positive curvature: identities requiring K ≤ 0 are skipped, the control stays.
  auto pos = run_suite(positive_curvature_control_metric(), {"pestov", "pestov_ineq"}, cfg);
  CHECK(pos.entries.size() == 1);
  CHECK(pos.environment.at("skipped_positive_curvature") == "pestov,pestov_ineq");
}

TEST_CASE("refining the grid does not inflate residuals") {
  // The C^{1,1} kink limits quadrature accuracy, so residuals are well above
  // round-off and must shrink, not grow, under refinement.
  std::mt19937_64 rng(37);
  auto c11 = MetricField::conformal_c11(0.25);
  for (int i = 0; i < 3; ++i) {
    auto u = sm::random_trig_polynomial(rng, 3, 3, true);
    const double coarse = check_pestov(c11, u, make_grid(c11, {12, 24, 32}), 1e-3, "u").residual;
    const double fine = check_pestov(c11, u, make_grid(c11, {24, 48, 32}), 1e-3, "u").residual;
    CHECK(coarse > 1e-12);
    CHECK(fine <= 1.1 * coarse);
  }
}
