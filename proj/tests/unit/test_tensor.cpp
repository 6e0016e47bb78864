#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <numeric>

#include "xrt/tensor/field.hpp"

using namespace xrt;
using namespace xrt::tensor;
using metric::MetricField;

namespace {

// Plain index-array view of a symmetric field: value at indices (0-based).
double sym_at(const Components<double>& c, const std::vector<int>& idx) {
  return c[std::count(idx.begin(), idx.end(), 1)];
}

std::vector<std::vector<int>> all_indices(int order) {
  std::vector<std::vector<int>> out;
  for (int code = 0; code < (1 << order); ++code) {
    std::vector<int> idx(order);
    for (int s = 0; s < order; ++s) idx[s] = (code >> (order - 1 - s)) & 1;
    out.push_back(idx);
  }
  return out;
}

// Average of t over all orderings of the slots, by explicit permutation.
template <class F>
double permutation_average(F t, const std::vector<int>& idx) {
  std::vector<int> perm(idx.size());
  std::iota(perm.begin(), perm.end(), 0);
  double s = 0;
  int count = 0;
  do {
    std::vector<int> p(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) p[k] = idx[perm[k]];
    s += t(p);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return s / count;
}

// ∇_j p_{i…} with ∂ by central differences of the components.
double cov_derivative_fd(const SymmetricTensorField& p, const MetricField& m, Vec2<double> x, int j,
                         const std::vector<int>& rest, double h = 1e-5) {
  Vec2<double> xp = x, xm = x;
  xp[j] += h;
  xm[j] -= h;
  double s = (sym_at(p.at(xp), rest) - sym_at(p.at(xm), rest)) / (2 * h);
  auto gam = m.christoffel(x);
  auto pc = p.at(x);
  for (std::size_t slot = 0; slot < rest.size(); ++slot)
    for (int l = 0; l < 2; ++l) {
      std::vector<int> swapped = rest;
      swapped[slot] = l;
      s -= gam[l][j][rest[slot]] * sym_at(pc, swapped);
    }
  return s;
}

SymmetricTensorField metric_as_field(const MetricField& m) {
  return SymmetricTensorField::from_function<3>(2, [m](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    auto g = m.g(x);
    Components<T> c = zero_components<T>();
    c[0] = g[0][0];
    c[1] = g[0][1];
    c[2] = g[1][1];
    return c;
  });
}

const std::vector<Vec2<double>> kPoints = {{0.3, -0.2}, {-0.55, 0.4}, {0.1, 0.75}, {0.6, 0.05}};

}  // namespace

TEST_CASE("symmetrization") {
  std::mt19937_64 rng(7);
  auto f = random_polynomial_field(2, 3, rng);
  GeneralTensorField h{2, {}};
  // Dense entries of a symmetric field, bit s set when slot s holds index 2.
  const auto& polys = f.as_polynomial()->polys();
  h.entries = {polys[0], polys[1], polys[1], polys[2]};
  auto sf = symmetrize(h);
  for (auto x : kPoints)
    for (int q = 0; q <= 2; ++q) CHECK(sf.at(x)[q] == doctest::Approx(f.at(x)[q]).epsilon(1e-14));

  GeneralTensorField e{2, {Polynomial(), Polynomial::constant(1.0), Polynomial(), Polynomial()}};
  auto se = symmetrize(e);
  CHECK(se.at(Vec2<double>{0.2, 0.1})[1] == 0.5);
  CHECK(se.at(Vec2<double>{0.2, 0.1})[0] == 0.0);

  GeneralTensorField r{3, {}};
  for (int k = 0; k < 8; ++k) r.entries.push_back(random_polynomial(rng, 2));
  auto sr = symmetrize(r);
  for (auto x : kPoints)
    for (const auto& idx : all_indices(3)) {
      auto entry = [&](const std::vector<int>& p) {
        int code = p[0] | (p[1] << 1) | (p[2] << 2);
        return r.entries[code](x[0], x[1]);
      };
      CHECK(sym_at(sr.at(x), idx) == doctest::Approx(permutation_average(entry, idx)).epsilon(1e-13));
    }
}

TEST_CASE("symmetrized covariant derivative in flat space") {
  auto flat = MetricField::euclidean();
  auto p0 = SymmetricTensorField::polynomial(0, {Polynomial::boundary_factor()});
  auto g0 = sym_cov_derivative(p0, flat);
  CHECK(g0.order() == 1);
  Vec2<double> x{0.3, -0.4};
  CHECK(g0.at(x)[0] == doctest::Approx(-0.6));
  CHECK(g0.at(x)[1] == doctest::Approx(0.8));

  auto p1 = SymmetricTensorField::polynomial(1, {Polynomial::boundary_factor(), Polynomial()});
  auto g1 = sym_cov_derivative(p1, flat);
  CHECK(g1.at(x)[1] == doctest::Approx(0.4));
  CHECK(g1.at(x)[0] == doctest::Approx(-0.6));
  CHECK(g1.at(x)[2] == 0.0);
}

TEST_CASE("symmetrized covariant derivative matches a finite-difference oracle") {
  std::mt19937_64 rng(11);
  for (const auto& m : {MetricField::hyperbolic_like(0.5), MetricField::conformal_c11(0.25),
                        MetricField::sampled_from(MetricField::hyperbolic_like(0.5), 41)}) {
    for (int k = 0; k <= 3; ++k) {
      auto p = random_potential(k, 3, rng);
      auto sp = sym_cov_derivative(p, m);
      for (auto x : kPoints) {
        auto c = sp.at(x);
        for (const auto& idx : all_indices(k + 1)) {
          auto nab = [&](const std::vector<int>& s) {
            return cov_derivative_fd(p, m, x, s[0], std::vector<int>(s.begin() + 1, s.end()));
          };
          CHECK(std::abs(sym_at(c, idx) - permutation_average(nab, idx)) <= 1e-4);
        }
      }
    }
  }
}

TEST_CASE("derivative levels and missing derivative data") {
  auto m = MetricField::hyperbolic_like(0.5);
  std::mt19937_64 rng(3);
  auto sp = sym_cov_derivative(random_potential(1, 2, rng), m);
  CHECK(sp.levels() == 2);
  auto [a, b] = seed2<0>(0.2, 0.3);
  auto c1 = sp.at<1>(Vec2<D<1>>{a, b});
  CHECK(c1[0].val == doctest::Approx(sp.at(Vec2<double>{0.2, 0.3})[0]));
  CHECK_THROWS_AS(sp.at<3>(Vec2<D<3>>{}), MissingDerivatives);

  SampledGrid grid{1, 5, {std::vector<double>(25, 1.0), std::vector<double>(25, 0.0)}, {}, {}};
  auto sampled = SymmetricTensorField::sampled(grid);
  CHECK(sampled.levels() == 0);
  CHECK_THROWS_AS(sym_cov_derivative(sampled, m), MissingDerivatives);
}

TEST_CASE("sampled fields with stored derivatives reproduce the source") {
  std::mt19937_64 rng(5);
  auto f = random_polynomial_field(1, 3, rng);
  const int n = 41;
  SampledGrid grid{1, n, {}, {}, {}};
  grid.values.assign(2, std::vector<double>(n * n));
  grid.d1 = grid.d2 = grid.values;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double x = -1 + 2.0 * i / (n - 1), y = -1 + 2.0 * j / (n - 1);
      auto [a, b] = seed2<0>(x, y);
      auto c = f.at<1>(Vec2<D<1>>{a, b});
      for (int q = 0; q < 2; ++q) {
        grid.values[q][j * n + i] = c[q].val;
        grid.d1[q][j * n + i] = c[q].d[0];
        grid.d2[q][j * n + i] = c[q].d[1];
      }
    }
  auto s = SymmetricTensorField::sampled(grid);
  CHECK(s.levels() == kMaxLevel);
  auto m = MetricField::hyperbolic_like(0.5);
  auto ds = sym_cov_derivative(s, m), df = sym_cov_derivative(f, m);
  for (auto x : kPoints) {
    for (int q = 0; q < 2; ++q) CHECK(std::abs(s.at(x)[q] - f.at(x)[q]) <= 1e-5);
    for (int q = 0; q < 3; ++q) CHECK(std::abs(ds.at(x)[q] - df.at(x)[q]) <= 1e-3);
  }
}

TEST_CASE("trace") {
  auto hyp = MetricField::hyperbolic_like(0.5);
  auto tg = trace(metric_as_field(hyp), hyp);
  for (auto x : kPoints) CHECK(tg.at(x)[0] == doctest::Approx(2.0).epsilon(1e-14));

  auto diag = SymmetricTensorField::polynomial(2, {Polynomial::constant(1), Polynomial(), Polynomial::constant(-1)});
  CHECK(trace(diag, MetricField::euclidean()).at(Vec2<double>{0.1, 0.2})[0] == 0.0);
  CHECK_THROWS_AS(trace(SymmetricTensorField::zero(1), hyp), OrderTooLow);

  std::mt19937_64 rng(13);
  auto conf = MetricField::conformal_c11(0.25);
  for (int m = 2; m <= 4; ++m) {
    auto f = random_polynomial_field(m, 2, rng);
    auto t = trace(f, conf);
    for (auto x : kPoints) {
      auto gi = inverse(conf.g(x));
      auto fc = f.at(x);
      for (const auto& rest : all_indices(m - 2)) {
        double s = 0;
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) {
            std::vector<int> idx{j, k};
            idx.insert(idx.end(), rest.begin(), rest.end());
            s += gi[j][k] * sym_at(fc, idx);
          }
        CHECK(sym_at(t.at(x), rest) == doctest::Approx(s).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("trace-free decomposition") {
  auto hyp = MetricField::hyperbolic_like(0.5);
  auto flat = MetricField::euclidean();
  auto diag = SymmetricTensorField::polynomial(2, {Polynomial::constant(1), Polynomial(), Polynomial::constant(-1)});
  auto parts = trace_free_decompose(diag, flat);
  REQUIRE(parts.size() == 2);
  Vec2<double> x{0.2, -0.3};
  CHECK(parts[0].at(x)[0] == doctest::Approx(1.0));
  CHECK(parts[0].at(x)[2] == doctest::Approx(-1.0));
  CHECK(std::abs(parts[1].at(x)[0]) <= 1e-14);

  auto gp = trace_free_decompose(metric_as_field(hyp), hyp);
  for (auto y : kPoints) {
    CHECK(gp[1].at(y)[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (int q = 0; q <= 2; ++q) CHECK(std::abs(gp[0].at(y)[q]) <= 1e-12);
  }

  std::mt19937_64 rng(17);
  for (const auto& m : {flat, hyp, MetricField::conformal_c11(0.25)})
    for (int order = 0; order <= 4; ++order) {
      auto f = random_polynomial_field(order, 2, rng);
      auto ps = trace_free_decompose(f, m);
      CHECK(ps.size() == static_cast<std::size_t>(order / 2 + 1));
      for (auto y : kPoints) {
        auto back = recompose_point(ps, m, y);
        for (int q = 0; q <= order; ++q) CHECK(std::abs(back[q] - f.at(y)[q]) <= 1e-10);
        for (const auto& p : ps)
          if (p.order() >= 2) {
            auto t = trace_point(p.order(), p.at(y), inverse(m.g(y)));
            for (int q = 0; q <= p.order() - 2; ++q) CHECK(std::abs(t[q]) <= 1e-12);
          }
      }
    }
  auto big = SymmetricTensorField::from_function<0>(4, [](const Vec2<double>&) { return zero_components<double>(); });
  CHECK_THROWS_AS(SymmetricTensorField::from_function<0>(5, [](const Vec2<double>&) { return zero_components<double>(); }),
                  UnsupportedOrder);
  CHECK(big.order() == 4);
}

TEST_CASE("lambda evaluation") {
  auto s = SymmetricTensorField::polynomial(0, {Polynomial::monomial(2.0, 1, 0)});
  CHECK(lambda_eval(s, {{0.25, 0.1}, {0.6, 0.8}}) == 0.5);
  CHECK(lambda_eval(s, {{0.25, 0.1}, {-1, 0}}) == 0.5);
  auto id = SymmetricTensorField::polynomial(2, {Polynomial::constant(1), Polynomial(), Polynomial::constant(1)});
  for (double th : {0.0, 0.4, 2.1, -1.3})
    CHECK(lambda_eval(id, {{0.1, 0.1}, {std::cos(th), std::sin(th)}}) == doctest::Approx(1.0).epsilon(1e-15));
  auto e11 = SymmetricTensorField::polynomial(2, {Polynomial::constant(1), Polynomial(), Polynomial()});
  for (double th : {0.3, 1.9})
    CHECK(lambda_eval(e11, {{0, 0}, {std::cos(th), std::sin(th)}}) ==
          doctest::Approx(std::cos(th) * std::cos(th)).epsilon(1e-15));

  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-0.7, 0.7), a(0, 2 * std::numbers::pi);
  for (int order = 0; order <= 4; ++order) {
    auto f = random_polynomial_field(order, 4, rng);
    std::vector<double> x1(37), x2(37), v1(37), v2(37), out(37);
    for (int i = 0; i < 37; ++i) {
      x1[i] = u(rng), x2[i] = u(rng);
      double t = a(rng);
      v1[i] = std::cos(t), v2[i] = std::sin(t);
    }
    f.lambda_batch({x1, x2, v1, v2}, out);
    for (int i = 0; i < 37; ++i) {
      double brute = 0;
      for (const auto& idx : all_indices(order)) {
        double w = sym_at(f.at(Vec2<double>{x1[i], x2[i]}), idx);
        for (int k : idx) w *= k == 0 ? v1[i] : v2[i];
        brute += w;
      }
      CHECK(out[i] == doctest::Approx(brute).epsilon(1e-12));
    }
    if (order == 4) continue;
    auto p = random_potential(order, 3, rng);
    for (const auto& m : {MetricField::euclidean(), MetricField::hyperbolic_like(0.5)}) {
      auto sp = sym_cov_derivative(p, m);
      sp.lambda_batch({x1, x2, v1, v2}, out);
      for (int i = 0; i < 37; ++i)
        CHECK(out[i] == doctest::Approx(sp.lambda({x1[i], x2[i]}, {v1[i], v2[i]})).epsilon(1e-11));
    }
  }
}

TEST_CASE("L2 inner product of tensor fields") {
  auto flat = MetricField::euclidean();
  auto one = SymmetricTensorField::polynomial(0, {Polynomial::constant(1)});
  CHECK(l2_inner_tensor(one, one, flat) == doctest::Approx(std::numbers::pi).epsilon(1e-13));
  auto diag = SymmetricTensorField::polynomial(2, {Polynomial::constant(1), Polynomial(), Polynomial::constant(-1)});
  auto id = SymmetricTensorField::polynomial(2, {Polynomial::constant(1), Polynomial(), Polynomial::constant(1)});
  CHECK(std::abs(l2_inner_tensor(diag, id, flat)) <= 1e-14);
  CHECK_THROWS_AS(l2_inner_tensor(one, id, flat), OrderMismatch);

  // Area of the disk under 4ρ²/(1−ρ²r²)² δ is 4πρ²/(1−ρ²).
  const double rho = 0.5;
  auto hyp = MetricField::hyperbolic_like(rho);
  const double area = 4 * std::numbers::pi * rho * rho / (1 - rho * rho);
  CHECK(l2_inner_tensor(one, one, hyp) == doctest::Approx(area).epsilon(1e-12));

  std::mt19937_64 rng(23);
  auto f = random_polynomial_field(2, 3, rng), h = random_polynomial_field(2, 3, rng);
  auto conf = MetricField::conformal_c11(0.25);
  double fh = l2_inner_tensor(f, h, conf, {32, 96});
  CHECK(fh == doctest::Approx(l2_inner_tensor(h, f, conf, {32, 96})).epsilon(1e-14));
  CHECK(l2_inner_tensor(f, f, conf) > 0);

  // Midpoint rule on a fine Cartesian grid as an independent quadrature.
  const int n = 1200;
  double mid = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec2<double> x{-1 + (i + 0.5) * 2.0 / n, -1 + (j + 0.5) * 2.0 / n};
      if (dot(x, x) >= 1) continue;
      auto g = conf.g(x);
      mid += metric_inner(2, f.at(x), h.at(x), inverse(g)) * std::sqrt(det(g)) * 4.0 / (n * n);
    }
  CHECK(fh == doctest::Approx(mid).epsilon(2e-3));
}

TEST_CASE("polynomial fields round-trip through JSON") {
  std::mt19937_64 rng(29);
  auto f = random_polynomial_field(3, 2, rng);
  auto g = field_from_json(field_to_json(f));
  for (auto x : kPoints)
    for (int q = 0; q <= 3; ++q) CHECK(g.at(x)[q] == f.at(x)[q]);

  auto j = nlohmann::json::parse(R"({"order": 2, "components": {"21": [[1.5, 1, 0]], "22": [[2.0, 0, 0]]}})");
  auto h = field_from_json(j);
  CHECK(h.at(Vec2<double>{0.4, 0})[1] == doctest::Approx(0.6));
  std::array<int, 2> i12{1, 2};
  CHECK(h.component({0.4, 0}, i12) == doctest::Approx(0.6));
  CHECK(h.at(Vec2<double>{0.4, 0})[2] == 2.0);

  CHECK_THROWS_AS(field_from_json(nlohmann::json::parse(R"({"order": 2, "components": {"12": [], "21": []}})")),
                  ConfigError);
  CHECK_THROWS_AS(field_from_json(nlohmann::json::parse(R"({"order": 2, "components": {"13": []}})")), ConfigError);
  CHECK_THROWS_AS(field_from_json(nlohmann::json::parse(R"({"order": 5})")), UnsupportedOrder);
}
