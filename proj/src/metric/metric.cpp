#include "xrt/metric/metric.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace xrt::metric {

namespace {

double compute_speed_bound(const MetricField& m) {
  double best = 0.0;
  const int n = 41;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec2<double> x{-1.0 + 2.0 * i / (n - 1), -1.0 + 2.0 * j / (n - 1)};
      double r2 = x[0] * x[0] + x[1] * x[1];
      if (r2 > 1.0) {
        double r = std::sqrt(r2);
        x = {x[0] / r, x[1] / r};
      }
      Mat2<double> g = m.g(x);
      double tr = g[0][0] + g[1][1];
      double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det(g)));
      best = std::max(best, std::sqrt(0.5 * tr + disc));
    }
  return best;
}

constexpr const char* kColumns[11] = {"x1",     "x2",     "g11",    "g12",    "g22",   "dg11_1",
                                      "dg12_1", "dg22_1", "dg11_2", "dg12_2", "dg22_2"};

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(8) << v;
  return os.str();
}

// Centered differences of the stored first derivatives, averaged over the two
// orders of differentiation; one-sided at the grid edge.
void fill_cross_derivatives(GridSampled& g) {
  g.cross.assign(g.nodes.size(), {0.0, 0.0, 0.0});
  auto at = [&](int i, int j) -> const std::array<double, 9>& {
    return g.nodes[static_cast<std::size_t>(j) * g.nx + i];
  };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int il = std::max(i - 1, 0), ir = std::min(i + 1, g.nx - 1);
      int jl = std::max(j - 1, 0), jr = std::min(j + 1, g.ny - 1);
      for (int c = 0; c < 3; ++c) {
        double d1 = (at(i, jr)[3 + c] - at(i, jl)[3 + c]) / ((jr - jl) * g.hy);
        double d2 = (at(ir, j)[6 + c] - at(il, j)[6 + c]) / ((ir - il) * g.hx);
        g.cross[static_cast<std::size_t>(j) * g.nx + i][c] = 0.5 * (d1 + d2);
      }
    }
}

MetricField::Family prepare(MetricField::Family family) {
  if (auto* gs = std::get_if<GridSampled>(&family)) {
    if (gs->nx < 2 || gs->ny < 2 || gs->nodes.size() != static_cast<std::size_t>(gs->nx) * gs->ny)
      throw ConfigError("grid_sampled: inconsistent grid dimensions");
    if (gs->cross.size() != gs->nodes.size()) fill_cross_derivatives(*gs);
  }
  return family;
}

}  // namespace

MetricField::MetricField(Family family)
    : family_(std::make_shared<const Family>(prepare(std::move(family)))) {
  if (const auto* h = std::get_if<HyperbolicLike>(family_.get())) {
    if (!(h->rho > 0.0 && h->rho < 1.0)) throw ConfigError("hyperbolic_like: rho must lie in (0, 1)");
  }
  if (const auto* c = std::get_if<ConformalC11>(family_.get())) {
    if (c->axis != 0 && c->axis != 1) throw ConfigError("conformal_c11: axis must be 0 or 1");
  }
  if (const auto* gs = std::get_if<GridSampled>(family_.get())) {
    if (gs->x0 > -1.0 || gs->y0 > -1.0 || gs->x0 + (gs->nx - 1) * gs->hx < 1.0 ||
        gs->y0 + (gs->ny - 1) * gs->hy < 1.0)
      throw ConfigError("grid_sampled: grid must cover the closed unit disk");
  }
  speed_bound_ = compute_speed_bound(*this);
}

std::string MetricField::id() const {
  return std::visit(
      [](const auto& m) -> std::string {
        using F = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<F, Euclidean>) {
          return "euclidean";
        } else if constexpr (std::is_same_v<F, HyperbolicLike>) {
          return "hyperbolic_like(rho=" + format_double(m.rho) + ")";
        } else if constexpr (std::is_same_v<F, ConformalC11>) {
          return "conformal_c11(eps=" + format_double(m.eps) + ",axis=" + std::to_string(m.axis) + ")";
        } else {
          return "grid_sampled(" + std::to_string(m.nx) + "x" + std::to_string(m.ny) +
                 (m.source.empty() ? "" : "," + m.source) + ")";
        }
      },
      *family_);
}

bool MetricField::on_kink(const Vec2<double>& x, double tol) const {
  if (const auto* c = std::get_if<ConformalC11>(family_.get())) return std::abs(x[c->axis]) <= tol;
  if (const auto* gs = std::get_if<GridSampled>(family_.get())) {
    double fx = (x[0] - gs->x0) / gs->hx;
    double fy = (x[1] - gs->y0) / gs->hy;
    return std::abs(fx - std::round(fx)) * gs->hx <= tol || std::abs(fy - std::round(fy)) * gs->hy <= tol;
  }
  return false;
}

MetricField MetricField::sampled_from(const MetricField& source, int n) {
  GridSampled grid;
  grid.nx = grid.ny = n;
  grid.x0 = grid.y0 = -1.0;
  grid.hx = grid.hy = 2.0 / (n - 1);
  grid.source = source.id();
  grid.nodes.resize(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Vec2<double> x{grid.x0 + i * grid.hx, grid.y0 + j * grid.hy};
      MetricJet<double> jet = source.jet(x);
      grid.nodes[static_cast<std::size_t>(j) * n + i] = {
          jet.g[0][0],     jet.g[0][1],     jet.g[1][1],     jet.dg[0][0][0], jet.dg[0][0][1],
          jet.dg[0][1][1], jet.dg[1][0][0], jet.dg[1][0][1], jet.dg[1][1][1]};
    }
  return MetricField(std::move(grid));
}

MetricField MetricField::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open metric grid file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty metric grid file: " + path);
  std::map<std::string, int> col;
  {
    std::stringstream ss(line);
    std::string name;
    int idx = 0;
    while (std::getline(ss, name, ',')) {
      name.erase(std::remove_if(name.begin(), name.end(), ::isspace), name.end());
      col[name] = idx++;
    }
  }
  for (int c = 0; c < 5; ++c)
    if (!col.count(kColumns[c])) throw ConfigError(std::string("metric grid file lacks column ") + kColumns[c]);
  for (int c = 5; c < 11; ++c)
    if (!col.count(kColumns[c]))
      throw MissingDerivatives(std::string("metric grid file lacks derivative column ") + kColumns[c]);

  std::vector<std::array<double, 11>> rows;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    std::array<double, 11> r{};
    for (int c = 0; c < 11; ++c) {
      int k = col[kColumns[c]];
      if (k >= static_cast<int>(vals.size())) throw ConfigError("short row in metric grid file");
      r[c] = vals[k];
    }
    rows.push_back(r);
  }
  std::set<double> xs, ys;
  for (const auto& r : rows) {
    xs.insert(r[0]);
    ys.insert(r[1]);
  }
  GridSampled grid;
  grid.nx = static_cast<int>(xs.size());
  grid.ny = static_cast<int>(ys.size());
  if (grid.nx < 2 || grid.ny < 2 || rows.size() != static_cast<std::size_t>(grid.nx) * grid.ny)
    throw ConfigError("metric grid file is not a full rectangular grid");
  grid.x0 = *xs.begin();
  grid.y0 = *ys.begin();
  grid.hx = (*xs.rbegin() - grid.x0) / (grid.nx - 1);
  grid.hy = (*ys.rbegin() - grid.y0) / (grid.ny - 1);
  grid.source = path;
  grid.nodes.resize(rows.size());
  for (const auto& r : rows) {
    int i = static_cast<int>(std::lround((r[0] - grid.x0) / grid.hx));
    int j = static_cast<int>(std::lround((r[1] - grid.y0) / grid.hy));
    std::array<double, 9> node;
    std::copy(r.begin() + 2, r.end(), node.begin());
    grid.nodes[static_cast<std::size_t>(j) * grid.nx + i] = node;
  }
  return MetricField(std::move(grid));
}

void MetricField::write_csv(const std::string& path) const {
  const auto* grid = std::get_if<GridSampled>(family_.get());
  if (grid == nullptr) throw UsageError("write_csv requires a grid_sampled metric");
  std::ofstream out(path);
  for (int c = 0; c < 11; ++c) out << (c ? "," : "") << kColumns[c];
  out << "\n" << std::setprecision(17);
  for (int j = 0; j < grid->ny; ++j)
    for (int i = 0; i < grid->nx; ++i) {
      out << grid->x0 + i * grid->hx << "," << grid->y0 + j * grid->hy;
      for (double v : grid->nodes[static_cast<std::size_t>(j) * grid->nx + i]) out << "," << v;
      out << "\n";
    }
}

CurvatureSample gauss_curvature(const MetricField& metric, const Vec2<double>& x) {
  auto [x1, x2] = seed2<0>(x[0], x[1]);
  Christoffel<D<1>> gd = metric.christoffel(Vec2<D<1>>{x1, x2});
  Mat2<double> g = metric.g(x);
  // R^i_{212} = ∂_1Γ^i_{22} − ∂_2Γ^i_{12} + Γ^i_{1m}Γ^m_{22} − Γ^i_{2m}Γ^m_{12}
  Vec2<double> r;
  for (int i = 0; i < 2; ++i) {
    double s = gd[i][1][1].d[0] - gd[i][0][1].d[1];
    for (int m = 0; m < 2; ++m)
      s += gd[i][0][m].val * gd[m][1][1].val - gd[i][1][m].val * gd[m][0][1].val;
    r[i] = s;
  }
  double r1212 = g[0][0] * r[0] + g[0][1] * r[1];
  return {r1212 / det(g), metric.on_kink(x)};
}

double fiber_angle(const Mat2<double>& g, const Vec2<double>& v) {
  Vec2<double> w = mul(sqrt_spd(g), v);
  return std::atan2(w[1], w[0]);
}

}  // namespace xrt::metric
