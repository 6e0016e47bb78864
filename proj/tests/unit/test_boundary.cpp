#include <doctest.h>

#include <cmath>
#include <numbers>

#include "xrt/boundary/potential.hpp"

using namespace xrt;
using namespace xrt::boundary;
using tensor::SymmetricTensorField;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<Vec2<double>> kInterior = {{0.7, 0.1}, {-0.2, 0.85}, {-0.6, -0.6}, {0.3, -0.9}, {0.95, 0.2}};

std::vector<MetricField> metrics() {
  return {MetricField::euclidean(), MetricField::conformal_c11(0.25), MetricField::hyperbolic_like(0.5)};
}

// f(a, b) for an order-2 symmetric tensor.
double bilinear(const tensor::Components<double>& f, Vec2<double> a, Vec2<double> b) {
  return f[0] * a[0] * b[0] + f[1] * (a[0] * b[1] + a[1] * b[0]) + f[2] * a[1] * b[1];
}

}  // namespace

TEST_CASE("component transformation") {
  // Rotation by t keeps g^{..}f_{..}f_{..} for the identity metric.
  std::mt19937_64 rng(3);
  auto f = tensor::random_polynomial_field(3, 2, rng).at(Vec2<double>{0.2, 0.4});
  const double t = 0.7;
  Mat2<double> rot{{{std::cos(t), -std::sin(t)}, {std::sin(t), std::cos(t)}}};
  auto fr = transform_components(3, f, rot);
  Mat2<double> id = identity2<double>();
  CHECK(tensor::metric_inner(3, fr, fr, id) == doctest::Approx(tensor::metric_inner(3, f, f, id)).epsilon(1e-13));
  // Order 2 against an explicit bilinear evaluation.
  auto f2 = tensor::random_polynomial_field(2, 2, rng).at(Vec2<double>{0.1, -0.3});
  Mat2<double> a{{{1.5, -0.2}, {0.3, 0.8}}};
  auto t2 = transform_components(2, f2, a);
  Vec2<double> c0{a[0][0], a[1][0]}, c1{a[0][1], a[1][1]};
  CHECK(t2[0] == doctest::Approx(bilinear(f2, c0, c0)).epsilon(1e-14));
  CHECK(t2[1] == doctest::Approx(bilinear(f2, c0, c1)).epsilon(1e-14));
  CHECK(t2[2] == doctest::Approx(bilinear(f2, c1, c1)).epsilon(1e-14));
}

TEST_CASE("partition of unity") {
  for (double t : {0.0, 0.1, 0.37, 0.5, 0.81, 1.0}) CHECK(smoothstep(1.0 - t) == doctest::Approx(1.0 - smoothstep(t)));
  for (const auto& part : {PartitionOfUnity::polar(), PartitionOfUnity::angular(3, kPi / 12)}) {
    for (int i = 0; i < 40; ++i)
      for (int j = 0; j < 13; ++j) {
        const double r = j / 12.0, phi = 2 * kPi * i / 40 + 0.01;
        Vec2<double> x{r * std::cos(phi), r * std::sin(phi)};
        double s = 0.0;
        for (std::size_t k = 0; k <= part.charts.size(); ++k) {
          const double psi = part.psi(static_cast<int>(k), x);
          CHECK(psi >= 0.0);
          s += psi;
        }
        CHECK(std::abs(s - 1.0) <= 1e-12);
      }
  }
  auto gap = PartitionOfUnity::angular(4, kPi / 16);
  gap.charts.pop_back();
  std::mt19937_64 rng(5);
  auto f = tensor::random_polynomial_field(2, 2, rng);
  CHECK_THROWS_AS(glue_boundary_potential(f, gap), CoverGap);
  CHECK_THROWS_AS(PartitionOfUnity::angular(2, 0.1), ConfigError);
}

TEST_CASE("local potential formula") {
  std::mt19937_64 rng(7);
  auto chart = BoundaryChart::polar();
  // m = 1: p = xⁿ f(∂_n) at the boundary point.
  auto f1 = tensor::random_polynomial_field(1, 3, rng);
  auto p1 = local_boundary_potential(f1, chart);
  CHECK(p1.order() == 0);
  for (auto x : kInterior) {
    const double r = std::sqrt(dot(x, x));
    Vec2<double> b{x[0] / r, x[1] / r};
    auto fb = f1.at(b);
    CHECK(p1.at(x)[0] == doctest::Approx((1 - r) * -(fb[0] * b[0] + fb[1] * b[1])).epsilon(1e-13));
  }
  // m = 2: p_θ = 2 xⁿ f(∂_θ, ∂_n), p_n = xⁿ f(∂_n, ∂_n).
  auto f2 = tensor::random_polynomial_field(2, 3, rng);
  auto p2 = local_boundary_potential(f2, chart);
  for (auto x : kInterior) {
    const double r = std::sqrt(dot(x, x));
    Vec2<double> b{x[0] / r, x[1] / r}, dth{-b[1], b[0]}, dn{-b[0], -b[1]};
    auto fb = f2.at(b);
    auto pc = to_chart(1, p2.at(x), chart, x);
    CHECK(pc[0] == doctest::Approx(2 * (1 - r) * bilinear(fb, dth, dn)).epsilon(1e-12));
    CHECK(pc[1] == doctest::Approx((1 - r) * bilinear(fb, dn, dn)).epsilon(1e-12));
  }
  auto p0 = local_boundary_potential(SymmetricTensorField::zero(3), chart);
  for (auto x : kInterior)
    for (double c : p0.at(x)) CHECK(c == 0.0);
  CHECK_THROWS_AS(local_boundary_potential(SymmetricTensorField::zero(0), chart), OrderTooLow);
}

TEST_CASE("covariant derivative along a vector") {
  std::mt19937_64 rng(11);
  for (const auto& m : metrics()) {
    auto p = tensor::random_polynomial_field(1, 3, rng);
    auto sp = tensor::sym_cov_derivative(p, m);
    for (auto x : kInterior) {
      Vec2<double> a{0.3, -1.1}, b{0.8, 0.5};
      // (σ∇p)(a, b) = ½(∇_a p(b) + ∇_b p(a))
      auto da = covariant_derivative_along(p, m, x, a), db = covariant_derivative_along(p, m, x, b);
      const double lhs = bilinear(sp.at(x), a, b);
      const double rhs = 0.5 * (da[0] * b[0] + da[1] * b[1] + db[0] * a[0] + db[1] * a[1]);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("glued potentials agree across chart systems") {
  std::mt19937_64 rng(13);
  for (int m = 1; m <= 3; ++m) {
    auto f = tensor::random_polynomial_field(m, 3, rng);
    auto polar = glue_boundary_potential(f, PartitionOfUnity::polar());
    auto three = glue_boundary_potential(f, PartitionOfUnity::angular(3, kPi / 12));
    auto local = local_boundary_potential(f, BoundaryChart::polar());
    for (int i = 0; i < 24; ++i)
      for (double r : {0.1, 0.45, 0.7, 0.95, 1.0}) {
        const double phi = 2 * kPi * i / 24 + 0.05;
        Vec2<double> x{r * std::cos(phi), r * std::sin(phi)};
        auto a = polar.at(x), b = three.at(x);
        for (int q = 0; q < m; ++q) {
          CHECK(std::abs(a[q] - b[q]) <= 1e-12);
          if (r >= 0.6) CHECK(std::abs(a[q] - local.at(x)[q]) <= 1e-14);
          if (r == 1.0) CHECK(std::abs(a[q]) <= 1e-12);
        }
      }
  }
}

TEST_CASE("tangential vanishing premise") {
  std::mt19937_64 rng(17);
  for (const auto& m : metrics()) {
    auto f = tensor::sym_cov_derivative(tensor::random_potential(1, 3, rng), m);
    CHECK(tangential_vanishing_check(f, m).max_abs <= 1e-6);
    auto vanishing = tensor::random_potential(2, 2, rng);
    CHECK(tangential_vanishing_check(vanishing, m).max_abs <= 1e-14);
    auto generic = tensor::random_polynomial_field(2, 2, rng);
    CHECK(tangential_vanishing_check(generic, m).max_abs > 1e-3);
  }
}

TEST_CASE("boundary identities of the glued potential") {
  std::mt19937_64 rng(19);
  for (const auto& m : metrics())
    for (int order = 1; order <= 3; ++order) {
      auto f = tensor::sym_cov_derivative(tensor::random_potential(order - 1, 3, rng), m);
      for (const auto& part : {PartitionOfUnity::polar(), PartitionOfUnity::angular(3, kPi / 12)}) {
        auto p = glue_boundary_potential(f, part);
        for (const auto& chart : part.charts) {
          auto rep = boundary_identities(f, p, m, chart, 64);
          CHECK(rep.max_boundary_value <= 1e-12);
          CHECK(rep.max_reconstruction <= 1e-3);
          CHECK(rep.max_normal_identity <= 1e-4);
          CHECK(rep.max_tangential_derivative <= 1e-4);
        }
      }
    }
  // Without the premise the all-tangential component cannot be matched.
  auto m = MetricField::euclidean();
  auto generic = tensor::random_polynomial_field(2, 2, rng);
  auto rep = boundary_identities(generic, glue_boundary_potential(generic, PartitionOfUnity::polar()), m,
                                 BoundaryChart::polar(), 64);
  CHECK(rep.max_normal_identity <= 1e-4);
  CHECK(rep.max_reconstruction > 1e-3);
}
