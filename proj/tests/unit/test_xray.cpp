#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "xrt/sphere/grid.hpp"
#include "xrt/transform/xray.hpp"

using namespace xrt;
using namespace xrt::transform;
using tensor::SymmetricTensorField;

namespace {

constexpr double kPi = std::numbers::pi;

// max over a Cartesian sample of the disk of the largest component magnitude.
double sup_norm(const SymmetricTensorField& p) {
  double m = 0.0;
  for (int i = -40; i <= 40; ++i)
    for (int j = -40; j <= 40; ++j) {
      Vec2<double> x{i / 40.0, j / 40.0};
      if (dot(x, x) > 1.0) continue;
      auto c = p.at(x);
      for (int q = 0; q <= p.order(); ++q) m = std::max(m, std::abs(c[q]));
    }
  return m;
}

}  // namespace

TEST_CASE("integral function on chords") {
  auto flat = MetricField::euclidean();
  auto zero = SymmetricTensorField::zero(2);
  CHECK(integral_function(zero, flat, {{0.1, 0.2}, {0.6, 0.8}}) == 0.0);
  auto one = SymmetricTensorField::polynomial(0, {tensor::Polynomial::constant(1.0)});
  CHECK(integral_function(one, flat, {{0, 0}, {1, 0}}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integral_function(one, flat, {{0.5, 0}, {0, 1}}) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
  // Outward boundary direction: τ = 0.
  CHECK(integral_function(one, flat, {{1, 0}, {1, 0}}) == 0.0);
}

TEST_CASE("boundary fan weights") {
  auto flat = MetricField::euclidean();
  BoundaryFan fan(flat, {16, 12, 1e-3});
  CHECK(fan.size() == 16 * 12);
  double total = 0.0;
  for (const auto& n : fan.nodes()) {
    CHECK(n.mu > 1e-3);
    CHECK(n.weight > 0.0);
    CHECK(mu_weight(flat, n.z) == doctest::Approx(n.mu).epsilon(1e-12));
    total += n.weight;
  }
  // ∫ cos θ dθ over |θ| < acos μ_min, times the boundary length 2π.
  CHECK(total == doctest::Approx(2 * kPi * 2 * std::sqrt(1 - 1e-6)).epsilon(1e-12));
  CHECK(fan.boundary_length() == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK_THROWS_AS(BoundaryFan(flat, {16, 12, 0.0}), ConfigError);
}

TEST_CASE("mu weight") {
  auto flat = MetricField::euclidean();
  CHECK(mu_weight(flat, {{1, 0}, {-1, 0}}) == doctest::Approx(1.0));
  CHECK(std::abs(mu_weight(flat, {{1, 0}, {0, 1}})) <= 1e-15);
  CHECK_THROWS_AS(mu_weight(flat, {{0.5, 0}, {1, 0}}), NotOnBoundary);
  for (const auto& m : {MetricField::hyperbolic_like(0.5), MetricField::conformal_c11(0.25)})
    for (double phi : {0.0, 1.0, 2.5, 4.0}) {
      Vec2<double> x{std::cos(phi), std::sin(phi)}, t{-std::sin(phi), std::cos(phi)};
      auto g = m.g(x);
      auto nu = metric::inward_normal(m, x);
      CHECK(std::abs(inner(g, nu, nu) - 1.0) <= 1e-10);
      CHECK(std::abs(inner(g, nu, t)) <= 1e-10);
      CHECK(dot(nu, x) < 0.0);
      CHECK(mu_weight(m, {x, nu}) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("transform of constants is the chord length") {
  auto flat = MetricField::euclidean();
  BoundaryFan fan(flat, {12, 10, 1e-3});
  auto one = SymmetricTensorField::polynomial(0, {tensor::Polynomial::constant(1.0)});
  auto data = xray_transform(one, flat, fan);
  REQUIRE(data.size() == fan.size());
  CHECK(data.failures() == 0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double chord = 2.0 * std::cos(fan.nodes()[i].theta);
    CHECK(std::abs(data.value[i] - chord) <= 1e-8);
    CHECK(std::abs(data.tau[i] - chord) <= 1e-8);
  }
}

TEST_CASE("transform annihilates potential fields") {
  std::mt19937_64 rng(31);
  for (const auto& m : {MetricField::euclidean(), MetricField::conformal_c11(0.25), MetricField::hyperbolic_like(0.5)}) {
    BoundaryFan fan(m, {24, 12, 1e-3});
    auto p = tensor::random_potential(1, 3, rng);
    auto f = tensor::sym_cov_derivative(p, m);
    auto data = xray_transform(f, m, fan);
    CHECK(data.failures() == 0);
    CHECK(data.max_abs() <= 1e-5 * sup_norm(p));
  }
}

TEST_CASE("transform is linear") {
  std::mt19937_64 rng(37);
  auto m = MetricField::hyperbolic_like(0.5);
  BoundaryFan fan(m, {8, 6, 1e-3});
  auto f = tensor::random_polynomial_field(2, 2, rng), h = tensor::random_polynomial_field(2, 3, rng);
  auto a = xray_transform(f, m, fan), b = xray_transform(h, m, fan);
  auto c = xray_transform(f.scaled(1.5) + h.scaled(-0.25), m, fan);
  for (std::size_t i = 0; i < c.size(); ++i)
    CHECK(std::abs(c.value[i] - (1.5 * a.value[i] - 0.25 * b.value[i])) <= 1e-13 * (1 + std::abs(c.value[i])));
}

TEST_CASE("potential residual converges under step refinement") {
  std::mt19937_64 rng(41);
  auto m = MetricField::hyperbolic_like(0.5);
  BoundaryFan fan(m, {8, 8, 1e-3});
  auto p = tensor::random_potential(0, 4, rng);
  auto f = tensor::sym_cov_derivative(p, m);
  GeodesicOptions coarse, fine;
  coarse.step = 0.04;
  fine.step = 0.02;
  const double rc = xray_transform(f, m, fan, coarse).max_abs();
  const double rf = xray_transform(f, m, fan, fine).max_abs();
  CHECK(rf < rc);
  CHECK(rc / rf >= 4.0);
}

TEST_CASE("integral function parity for potential fields") {
  std::mt19937_64 rng(43);
  for (int order : {0, 1, 2}) {
    auto m = MetricField::hyperbolic_like(0.5);
    auto f = tensor::sym_cov_derivative(tensor::random_potential(order, 3, rng), m);
    const int mm = order + 1;
    for (Vec2<double> x : {Vec2<double>{0.2, -0.3}, Vec2<double>{-0.5, 0.4}}) {
      for (double a : {0.3, 2.0, 4.4}) {
        auto v = metric::fiber_vector(m.g(x), a);
        double fwd = integral_function(f, m, {x, v});
        double back = integral_function(f, m, {x, {-v[0], -v[1]}});
        // u(x, −v) = (−1)^{m+1} u(x, v)
        CHECK(std::abs(back - (mm % 2 == 0 ? -fwd : fwd)) <= 1e-5);
      }
    }
  }
}

TEST_CASE("rays that do not exit are flagged per node") {
  auto m = MetricField::euclidean();
  BoundaryFan fan(m, {4, 8, 1e-3});
  auto one = SymmetricTensorField::polynomial(0, {tensor::Polynomial::constant(1.0)});
  GeodesicOptions o;
  o.max_time = 0.5;
  auto data = xray_transform(one, m, fan, o);
  CHECK(data.failures() > 0);
  CHECK(data.failures() < data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    if (!data.failed[i]) CHECK(data.tau[i] <= 0.5 + 1e-3);
}

TEST_CASE("X-ray CSV round trip") {
  auto m = MetricField::hyperbolic_like(0.5);
  BoundaryFan fan(m, {4, 3, 1e-3});
  std::mt19937_64 rng(47);
  auto data = xray_transform(tensor::random_polynomial_field(1, 2, rng), m, fan, {}, "rand1");
  data.failed[2] = true;
  auto path = (std::filesystem::temp_directory_path() / "xrt_xray.csv").string();
  write_csv(data, path);
  auto back = read_xray_csv(path);
  CHECK(back.metric_id == m.id());
  CHECK(back.field_id == "rand1");
  CHECK(back.step == data.step);
  REQUIRE(back.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(back.phi[i] == data.phi[i]);
    CHECK(back.alpha[i] == data.alpha[i]);
    CHECK(back.tau[i] == data.tau[i]);
    CHECK(back.failed[i] == data.failed[i]);
    if (!data.failed[i]) CHECK(back.value[i] == data.value[i]);
  }
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_xray_csv(path), ConfigError);
}

TEST_CASE("Santalo formula") {
  auto flat = MetricField::euclidean();
  BoundaryFan fan(flat);
  auto zero = sm::SMFunction::constant(0.0);
  CHECK(santalo_integral(zero, flat, fan).value == 0.0);
  auto bump = sm::SMFunction::from_function<3>([](const auto& x1, const auto& x2, const auto&) {
    return 1.0 - x1 * x1 - x2 * x2;
  });
  auto s = santalo_integral(bump, flat, fan);
  CHECK(std::abs(s.value - kPi * kPi) <= 1e-4);
  CHECK(s.cutoff_estimate <= 1e-4);

  std::mt19937_64 rng(53);
  for (const auto& m : {MetricField::hyperbolic_like(0.5), MetricField::conformal_c11(0.25)}) {
    auto F = sm::trig_function(sm::random_trig_polynomial(rng, 2, 2, true));
    auto grid = std::make_shared<const sm::SMGrid>(m, sm::SMGridSpec{24, 48, 16});
    double direct = sm::sm_inner(sm::sample(F, grid), sm::sample(sm::SMFunction::constant(1.0), grid));
    BoundaryFan mf(m);
    auto r = santalo_integral(F, m, mf);
    CHECK(std::abs(r.value - direct) <= 1e-3 * std::max(1.0, std::abs(direct)));
  }
}
