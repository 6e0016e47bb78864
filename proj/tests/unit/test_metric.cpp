#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "xrt/metric/diagnostics.hpp"
#include "xrt/metric/geodesic.hpp"

using namespace xrt;
using namespace xrt::metric;

namespace {

// ∂g by central differences of the metric values only.
Christoffel<double> christoffel_fd(const MetricField& m, Vec2<double> x, double h = 1e-5) {
  MetricJet<double> jet;
  jet.g = m.g(x);
  for (int k = 0; k < 2; ++k) {
    Vec2<double> xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    Mat2<double> gp = m.g(xp), gm = m.g(xm);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) jet.dg[k][i][j] = (gp[i][j] - gm[i][j]) / (2 * h);
  }
  return christoffel_from_jet(jet);
}

// K = −e^{−2φ} Δφ with Δφ by a 5-point stencil on a closed-form φ.
template <class Phi>
double conformal_curvature_fd(Phi phi, Vec2<double> x, double h = 1e-4) {
  double lap = (phi({x[0] + h, x[1]}) + phi({x[0] - h, x[1]}) + phi({x[0], x[1] + h}) +
                phi({x[0], x[1] - h}) - 4 * phi(x)) /
               (h * h);
  return -std::exp(-2 * phi(x)) * lap;
}

double max_gamma_gap(const Christoffel<double>& a, const Christoffel<double>& b) {
  double gap = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) gap = std::max(gap, std::abs(a[i][j][k] - b[i][j][k]));
  return gap;
}

std::vector<MetricField> families() {
  return {MetricField::euclidean(), MetricField::hyperbolic_like(0.5), MetricField::conformal_c11(0.25),
          MetricField::sampled_from(MetricField::hyperbolic_like(0.5), 81)};
}

}  // namespace

TEST_CASE("flat Christoffel symbols vanish") {
  auto gam = MetricField::euclidean().christoffel(Vec2<double>{0.3, -0.2});
  for (auto& a : gam)
    for (auto& b : a)
      for (double c : b) CHECK(c == 0.0);
  auto grid = MetricField::sampled_from(MetricField::euclidean(), 11);
  CHECK(max_gamma_gap(grid.christoffel(Vec2<double>{0.31, -0.17}), Christoffel<double>{}) <= 1e-6);
}

TEST_CASE("Christoffel symbols agree with finite differences of g and are symmetric") {
  for (const auto& m : families()) {
    for (Vec2<double> x : {Vec2<double>{0.3, -0.2}, Vec2<double>{-0.6, 0.1}, Vec2<double>{0.05, 0.7}}) {
      auto gam = m.christoffel(x);
      CHECK(max_gamma_gap(gam, christoffel_fd(m, x)) <= 1e-4);
      for (int i = 0; i < 2; ++i) CHECK(gam[i][0][1] == gam[i][1][0]);
    }
  }
  auto conf = MetricField::conformal_c11(0.25);
  Vec2<double> x{0.4, 0.3};
  CHECK(conf.christoffel(x)[0][0][0] == doctest::Approx(2 * 0.25 * 0.4).epsilon(1e-12));
  CHECK(max_gamma_gap(conf.christoffel(x), christoffel_fd(conf, x)) <= 1e-8);
}

TEST_CASE("singular metric raises") {
  MetricJet<double> jet;
  jet.g = {{{1.0, 1.0}, {1.0, 1.0}}};
  CHECK_THROWS_AS(christoffel_from_jet(jet), SingularMetric);
}

TEST_CASE("Gauss curvature matches the conformal Laplacian formula") {
  CHECK(gauss_curvature(MetricField::euclidean(), {0.2, 0.4}).value == 0.0);

  const double rho = 0.5;
  auto hyp_phi = [&](Vec2<double> x) { return std::log(2 * rho / (1 - rho * rho * (x[0] * x[0] + x[1] * x[1]))); };
  auto hyp = MetricField::hyperbolic_like(rho);
  for (Vec2<double> x : {Vec2<double>{0, 0}, Vec2<double>{0.5, -0.3}, Vec2<double>{-0.1, 0.9}}) {
    double k = gauss_curvature(hyp, x).value;
    CHECK(k == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(std::abs(k - conformal_curvature_fd(hyp_phi, x)) <= 1e-6);
  }

  const double eps = 0.25;
  auto c11_phi = [&](Vec2<double> x) { return x[0] > 0 ? eps * x[0] * x[0] : 0.0; };
  auto c11 = MetricField::conformal_c11(eps);
  for (Vec2<double> x : {Vec2<double>{0.5, 0.2}, Vec2<double>{0.1, -0.7}}) {
    auto k = gauss_curvature(c11, x);
    CHECK(k.value <= 0.0);
    CHECK_FALSE(k.non_smooth);
    CHECK(std::abs(k.value - conformal_curvature_fd(c11_phi, x)) <= 1e-6);
  }
  CHECK(gauss_curvature(c11, {-0.4, 0.3}).value == 0.0);
  CHECK(gauss_curvature(c11, {0.0, 0.3}).non_smooth);
}

TEST_CASE("Euclidean geodesics reproduce chord lengths") {
  auto m = MetricField::euclidean();
  auto p = geodesic_integrate(m, {{0, 0}, {1, 0}});
  CHECK(p.exit_time == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(p.exit_point.x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(p.exit_point.x[1]) <= 1e-12);
  CHECK(travel_time(m, {{0.5, 0}, {1, 0}}) == doctest::Approx(0.5).epsilon(1e-11));

  Vec2<double> x{0.5, 0}, v{0, 1};
  double xv = dot(x, v);
  double closed = -xv + std::sqrt(xv * xv + 1 - dot(x, x));
  CHECK(std::abs(travel_time(m, {x, v}) - closed) <= 1e-11);
  CHECK(closed == doctest::Approx(0.8660254037844386));
}

TEST_CASE("boundary travel time vanishes for outward and tangential directions") {
  for (const auto& m : families()) {
    CHECK(travel_time(m, {{1, 0}, {0, 1}}) == 0.0);
    CHECK(travel_time(m, {{0, 1}, {0.1, 0.2}}) == 0.0);
    CHECK(travel_time(m, boundary_point(m, 0.3, 0.2)) > 0.0);
  }
}

TEST_CASE("unit speed is conserved and paths are reversible") {
  for (const auto& m : families()) {
    const bool flat = m.is_flat();
    for (double theta : {-1.2, -0.3, 0.0, 0.7, 1.4}) {
      PhasePoint z = boundary_point(m, 0.9, theta);
      auto p = geodesic_integrate(m, z);
      CHECK(p.max_drift <= (flat ? 1e-10 : 1e-6));
      for (const auto& s : p.samples) CHECK(dot(s.x, s.x) <= 1.0 + 1e-12);
      CHECK(p.samples.back().t == doctest::Approx(p.exit_time));
      PhasePoint back{p.exit_point.x, {-p.exit_point.v[0], -p.exit_point.v[1]}};
      auto q = geodesic_integrate(m, back);
      double err = std::hypot(q.exit_point.x[0] - z.x[0], q.exit_point.x[1] - z.x[1]);
      CHECK(err <= (flat ? 1e-8 : 1e-5));
      CHECK(std::abs(q.exit_time - p.exit_time) <= (flat ? 1e-8 : 1e-5));
    }
  }
}

TEST_CASE("path quadrature weights integrate the parameter exactly") {
  auto m = MetricField::hyperbolic_like(0.5);
  auto p = geodesic_integrate(m, boundary_point(m, 0.2, 0.4), {.step = 1e-2});
  auto w = p.weights();
  double len = 0, tt = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    len += w[i];
    tt += w[i] * p.samples[i].t * p.samples[i].t;
  }
  CHECK(len == doctest::Approx(p.exit_time).epsilon(1e-13));
  CHECK(tt == doctest::Approx(std::pow(p.exit_time, 3) / 3).epsilon(1e-12));
}

TEST_CASE("oversized steps and closed geodesics raise") {
  auto m = MetricField::hyperbolic_like(0.9);
  CHECK_THROWS_AS(geodesic_integrate(m, boundary_point(m, 0.0, 0.0), {.step = 0.5}), StepTooLarge);
  CHECK_THROWS_AS(geodesic_integrate(MetricField::euclidean(), {{0, 0}, {1, 0}}, {.max_time = 0.5}), NoExit);
}

TEST_CASE("grid metrics load from CSV") {
  auto src = MetricField::sampled_from(MetricField::conformal_c11(0.25), 21);
  auto path = std::filesystem::temp_directory_path() / "xrt_grid_metric.csv";
  src.write_csv(path.string());
  auto loaded = MetricField::from_csv(path.string());
  Vec2<double> x{0.33, -0.41};
  CHECK(max_gamma_gap(loaded.christoffel(x), src.christoffel(x)) <= 1e-12);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(MetricField::from_csv("/nonexistent/metric.csv"), ConfigError);
}

TEST_CASE("simplicity diagnostics") {
  DiagnosticSamples s{.n_boundary = 8, .n_angle = 6, .n_curvature = 300, .n_lipschitz = 300, .step = 2e-3};
  auto flat = simplicity_diagnostics(MetricField::euclidean(), s);
  CHECK_FALSE(flat.conjugate_point);
  CHECK(flat.min_jacobi_ratio == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(flat.frac_zero == 1.0);
  CHECK(flat.tau2_lipschitz == doctest::Approx(4.0).epsilon(0.03));
  CHECK(flat.tau2_lipschitz <= 4.0 + 1e-3);

  auto hyp = simplicity_diagnostics(MetricField::hyperbolic_like(0.5), s);
  CHECK(hyp.frac_negative == 1.0);
  CHECK_FALSE(hyp.conjugate_point);
  CHECK(hyp.max_travel_time <= 4 * std::atanh(0.5) + 1e-6);

  auto pocket = simplicity_diagnostics(MetricField::conformal_c11(-0.5), s);
  CHECK(pocket.frac_positive > 0.3);
}
