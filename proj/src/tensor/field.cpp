#include "xrt/tensor/field.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <numbers>

#include "xrt/core/quadrature.hpp"

namespace xrt::tensor {

using metric::MetricField;

void FieldModel::lambda_batch(const PhaseBatch& pts, std::span<double> out) const {
  const int m = order();
  for (std::size_t i = 0; i < pts.size(); ++i)
    out[i] = contract_lambda(m, eval0({pts.x1[i], pts.x2[i]}), Vec2<double>{pts.v1[i], pts.v2[i]});
}

std::array<std::array<double, kMaxOrder + 1>, kMaxOrder + 1> inner_matrix(int order, const Mat2<double>& ginv) {
  std::array<std::array<double, kMaxOrder + 1>, kMaxOrder + 1> p{};
  const int n = 1 << order;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double w = 1.0;
      for (int slot = 0; slot < order; ++slot) w *= ginv[(i >> slot) & 1][(j >> slot) & 1];
      p[std::popcount(static_cast<unsigned>(i))][std::popcount(static_cast<unsigned>(j))] += w;
    }
  return p;
}

namespace {

// Per-thread scratch for batched component evaluation; slots keep stable
// addresses so several may be held at once.
std::vector<double>& scratch(std::size_t slot, std::size_t n) {
  thread_local std::array<std::vector<double>, 3 * (kMaxOrder + 1)> pool;
  if (pool[slot].size() < n) pool[slot].resize(n);
  return pool[slot];
}

class CombinationModel final : public ModelBase<CombinationModel, kMaxLevel> {
 public:
  explicit CombinationModel(std::vector<std::pair<double, std::shared_ptr<const FieldModel>>> terms)
      : terms_(std::move(terms)) {
    order_ = terms_.front().second->order();
    levels_ = kMaxLevel;
    for (const auto& t : terms_) levels_ = std::min(levels_, t.second->levels());
  }
  int order() const override { return order_; }
  int levels() const override { return levels_; }

  void lambda_batch(const PhaseBatch& pts, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> part(pts.size());
    for (const auto& [c, f] : terms_) {
      f->lambda_batch(pts, part);
      for (std::size_t i = 0; i < pts.size(); ++i) out[i] += c * part[i];
    }
  }

  template <int K>
  Components<D<K>> components(const Vec2<D<K>>& x) const {
    Components<D<K>> s = zero_components<D<K>>();
    for (const auto& [c, f] : terms_) {
      Components<D<K>> v = f->template eval<K>(x);
      for (int q = 0; q <= order_; ++q) s[q] += c * v[q];
    }
    return s;
  }

 private:
  std::vector<std::pair<double, std::shared_ptr<const FieldModel>>> terms_;
  int order_ = 0;
  int levels_ = 0;
};

// σ∇p for a potential p of order k = m − 1.
class GaugeModel final : public ModelBase<GaugeModel, kMaxLevel - 1> {
 public:
  GaugeModel(SymmetricTensorField p, MetricField metric) : p_(std::move(p)), metric_(std::move(metric)) {
    if (p_.levels() < 1) throw MissingDerivatives("symmetrized covariant derivative needs differentiable input");
    if (const PolynomialModel* poly = p_.as_polynomial()) {
      for (int axis = 0; axis < 2; ++axis)
        for (const Polynomial& c : poly->polys()) dpolys_[axis].push_back(c.derivative(axis));
    }
  }
  int order() const override { return p_.order() + 1; }
  int levels() const override { return std::min(p_.levels() - 1, kMaxLevel - 1); }

  template <int K>
  Components<D<K>> components(const Vec2<D<K>>& x) const {
    using T = D<K>;
    const int k = p_.order();
    auto [y1, y2] = seed2<K>(x[0], x[1]);
    Components<D<K + 1>> pc = p_.template at<K + 1>(Vec2<D<K + 1>>{y1, y2});
    Christoffel<T> gam = metric_.christoffel(x);
    Dense<T> nab;
    nab.order = k + 1;
    for (int idx = 0; idx < (1 << (k + 1)); ++idx) {
      const int j = idx & 1;
      const int rest = idx >> 1;
      T s = pc[std::popcount(static_cast<unsigned>(rest))].d[j];
      for (int slot = 0; slot < k; ++slot) {
        const int is = (rest >> slot) & 1;
        for (int l = 0; l < 2; ++l) {
          const int swapped = (rest & ~(1 << slot)) | (l << slot);
          s -= gam[l][j][is] * pc[std::popcount(static_cast<unsigned>(swapped))].val;
        }
      }
      nab.c[idx] = s;
    }
    return symmetrize(nab);
  }

  void lambda_batch(const PhaseBatch& pts, std::span<double> out) const override {
    if (dpolys_[0].empty()) {
      FieldModel::lambda_batch(pts, out);
      return;
    }
    const PolynomialModel& poly = *p_.as_polynomial();
    const int k = p_.order();
    const std::size_t n = pts.size();
    // Slots: [0, k] values, then ∂1 and ∂2 of each component.
    std::vector<double>* buf[3 * (kMaxOrder + 1)];
    for (int q = 0; q <= k; ++q) {
      buf[q] = &scratch(q, n);
      buf[k + 1 + q] = &scratch(k + 1 + q, n);
      buf[2 * (k + 1) + q] = &scratch(2 * (k + 1) + q, n);
      std::span<double> v0(buf[q]->data(), n), v1(buf[k + 1 + q]->data(), n), v2(buf[2 * (k + 1) + q]->data(), n);
      poly.polys()[q].eval_batch(pts.x1, pts.x2, v0);
      dpolys_[0][q].eval_batch(pts.x1, pts.x2, v1);
      dpolys_[1][q].eval_batch(pts.x1, pts.x2, v2);
    }
    Components<double> c0{}, c1{}, c2{};
    for (std::size_t i = 0; i < n; ++i) {
      for (int q = 0; q <= k; ++q) {
        c0[q] = (*buf[q])[i];
        c1[q] = (*buf[k + 1 + q])[i];
        c2[q] = (*buf[2 * (k + 1) + q])[i];
      }
      Vec2<double> v{pts.v1[i], pts.v2[i]};
      // λ(σ∇p) = v^j ∂_j(λp) − k p(Γ(v, v), v, …, v)
      double s = v[0] * contract_lambda(k, c1, v) + v[1] * contract_lambda(k, c2, v);
      if (k > 0 && !metric_.is_flat()) {
        Vec2<double> gvv = contract(metric_.christoffel(Vec2<double>{pts.x1[i], pts.x2[i]}), v, v);
        s -= k * contract_partial(k, c0, gvv, v);
      }
      out[i] = s;
    }
  }

 private:
  SymmetricTensorField p_;
  MetricField metric_;
  std::array<std::vector<Polynomial>, 2> dpolys_;
};

class TraceModel final : public ModelBase<TraceModel, kMaxLevel> {
 public:
  TraceModel(SymmetricTensorField f, MetricField metric) : f_(std::move(f)), metric_(std::move(metric)) {}
  int order() const override { return f_.order() - 2; }
  int levels() const override { return f_.levels(); }

  template <int K>
  Components<D<K>> components(const Vec2<D<K>>& x) const {
    return trace_point(f_.order(), f_.template at<K>(x), inverse(metric_.g(x)));
  }

 private:
  SymmetricTensorField f_;
  MetricField metric_;
};

// Symmetric components of σ(g^{⊗j} ⊗ q) for q of order m − 2j.
Components<double> raise_by_metric(const Mat2<double>& g, int j, int qorder, const Components<double>& q) {
  Dense<double> acc = to_dense(qorder, q);
  Dense<double> gd = dense_matrix(g);
  for (int s = 0; s < j; ++s) acc = outer(gd, acc);
  return symmetrize(acc);
}

// Basis (as columns) of trace-free symmetric tensors of the given order.
Eigen::MatrixXd trace_free_basis(int order, const Mat2<double>& ginv) {
  if (order < 2) return Eigen::MatrixXd::Identity(order + 1, order + 1);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(order - 1, order + 1);
  for (int q = 0; q <= order - 2; ++q) {
    t(q, q) = ginv[0][0];
    t(q, q + 1) = ginv[0][1] + ginv[1][0];
    t(q, q + 2) = ginv[1][1];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(t);
  return lu.kernel();
}

std::vector<Components<double>> decompose_point(int m, const Components<double>& f, const Mat2<double>& g) {
  const Mat2<double> ginv = inverse(g);
  std::vector<Eigen::MatrixXd> bases;
  std::vector<Eigen::MatrixXd> columns;
  int total = 0;
  for (int j = 0; 2 * j <= m; ++j) {
    const int k = m - 2 * j;
    Eigen::MatrixXd b = trace_free_basis(k, ginv);
    Eigen::MatrixXd cols(m + 1, b.cols());
    for (int c = 0; c < b.cols(); ++c) {
      Components<double> q = zero_components<double>();
      for (int r = 0; r <= k; ++r) q[r] = b(r, c);
      Components<double> lifted = raise_by_metric(g, j, k, q);
      for (int r = 0; r <= m; ++r) cols(r, c) = lifted[r];
    }
    total += static_cast<int>(b.cols());
    bases.push_back(std::move(b));
    columns.push_back(std::move(cols));
  }
  Eigen::MatrixXd a(m + 1, total);
  for (int c = 0, j = 0; j < static_cast<int>(columns.size()); c += static_cast<int>(columns[j].cols()), ++j)
    a.middleCols(c, columns[j].cols()) = columns[j];
  Eigen::VectorXd rhs(m + 1);
  for (int r = 0; r <= m; ++r) rhs(r) = f[r];
  Eigen::VectorXd coef = a.colPivHouseholderQr().solve(rhs);
  std::vector<Components<double>> parts;
  for (int c = 0, j = 0; j < static_cast<int>(bases.size()); c += static_cast<int>(bases[j].cols()), ++j) {
    Eigen::VectorXd q = bases[j] * coef.segment(c, bases[j].cols());
    Components<double> comps = zero_components<double>();
    for (int r = 0; r < q.size(); ++r) comps[r] = q(r);
    parts.push_back(comps);
  }
  return parts;
}

}  // namespace

PolynomialModel::PolynomialModel(int order, std::vector<Polynomial> comps) : order_(order), comps_(std::move(comps)) {
  SymmetricTensorField::check_order(order);
  if (static_cast<int>(comps_.size()) != order + 1)
    throw std::invalid_argument("polynomial field needs order + 1 symmetric components");
}

void PolynomialModel::lambda_batch(const PhaseBatch& pts, std::span<double> out) const {
  const std::size_t n = pts.size();
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double>& comp = scratch(0, n);
  std::vector<double>& mono = scratch(1, n);
  for (int q = 0; q <= order_; ++q) {
    if (comps_[q].is_zero()) continue;
    comps_[q].eval_batch(pts.x1, pts.x2, std::span<double>(comp.data(), n));
    const double c = binomial(order_, q);
    for (std::size_t i = 0; i < n; ++i) {
      double w = c;
      for (int s = 0; s < order_ - q; ++s) w *= pts.v1[i];
      for (int s = 0; s < q; ++s) w *= pts.v2[i];
      mono[i] = w;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] += mono[i] * comp[i];
  }
}

SampledModel::SampledModel(SampledGrid grid) : grid_(std::move(grid)) {
  SymmetricTensorField::check_order(grid_.order);
  const std::size_t nodes = static_cast<std::size_t>(grid_.n) * grid_.n;
  auto valid = [&](const std::vector<std::vector<double>>& a) {
    if (static_cast<int>(a.size()) != grid_.order + 1) return false;
    return std::all_of(a.begin(), a.end(), [&](const auto& v) { return v.size() == nodes; });
  };
  if (grid_.n < 2 || !valid(grid_.values)) throw ConfigError("sampled tensor field: inconsistent grid");
  const bool has_d1 = !grid_.d1.empty(), has_d2 = !grid_.d2.empty();
  if (has_d1 != has_d2) throw MissingDerivatives("sampled tensor field stores only one partial derivative");
  if (!has_d1) return;
  if (!valid(grid_.d1) || !valid(grid_.d2)) throw ConfigError("sampled tensor field: inconsistent derivative grid");
  const int n = grid_.n;
  const double h = 2.0 / (n - 1);
  cross_.assign(grid_.order + 1, std::vector<double>(nodes));
  for (int q = 0; q <= grid_.order; ++q)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        int il = std::max(i - 1, 0), ir = std::min(i + 1, n - 1);
        int jl = std::max(j - 1, 0), jr = std::min(j + 1, n - 1);
        double a = (grid_.d1[q][static_cast<std::size_t>(jr) * n + i] - grid_.d1[q][static_cast<std::size_t>(jl) * n + i]) /
                   ((jr - jl) * h);
        double b = (grid_.d2[q][static_cast<std::size_t>(j) * n + ir] - grid_.d2[q][static_cast<std::size_t>(j) * n + il]) /
                   ((ir - il) * h);
        cross_[q][static_cast<std::size_t>(j) * n + i] = 0.5 * (a + b);
      }
}

void SymmetricTensorField::check_order(int order) {
  if (order < 0 || order > kMaxOrder)
    throw UnsupportedOrder("tensor order " + std::to_string(order) + " outside 0.." + std::to_string(kMaxOrder));
}

SymmetricTensorField::SymmetricTensorField() : SymmetricTensorField(zero(0)) {}

SymmetricTensorField::SymmetricTensorField(std::shared_ptr<const FieldModel> model) : model_(std::move(model)) {}

SymmetricTensorField SymmetricTensorField::zero(int order) {
  return polynomial(order, std::vector<Polynomial>(static_cast<std::size_t>(std::max(order, 0)) + 1));
}

SymmetricTensorField SymmetricTensorField::polynomial(int order, std::vector<Polynomial> comps) {
  return SymmetricTensorField(std::make_shared<const PolynomialModel>(order, std::move(comps)));
}

SymmetricTensorField SymmetricTensorField::sampled(SampledGrid grid) {
  return SymmetricTensorField(std::make_shared<const SampledModel>(std::move(grid)));
}

double SymmetricTensorField::component(const Vec2<double>& x, std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != order()) throw OrderMismatch("component index count differs from order");
  int q = 0;
  for (int i : indices) {
    if (i != 1 && i != 2) throw std::invalid_argument("component indices are 1 or 2");
    q += i == 2;
  }
  return at(x)[q];
}

double SymmetricTensorField::lambda(const Vec2<double>& x, const Vec2<double>& v) const {
  return contract_lambda(order(), at(x), v);
}

SymmetricTensorField SymmetricTensorField::operator+(const SymmetricTensorField& o) const {
  return linear_combination({{1.0, *this}, {1.0, o}});
}

SymmetricTensorField SymmetricTensorField::operator-(const SymmetricTensorField& o) const {
  return linear_combination({{1.0, *this}, {-1.0, o}});
}

SymmetricTensorField SymmetricTensorField::scaled(double c) const { return linear_combination({{c, *this}}); }

SymmetricTensorField linear_combination(const std::vector<std::pair<double, SymmetricTensorField>>& terms) {
  if (terms.empty()) throw std::invalid_argument("empty linear combination");
  const int m = terms.front().second.order();
  for (const auto& t : terms)
    if (t.second.order() != m) throw OrderMismatch("linear combination of fields with different orders");
  const bool all_poly = std::all_of(terms.begin(), terms.end(), [](const auto& t) { return t.second.as_polynomial(); });
  if (all_poly) {
    std::vector<Polynomial> comps(static_cast<std::size_t>(m) + 1);
    for (const auto& [c, f] : terms)
      for (int q = 0; q <= m; ++q) comps[q] = comps[q] + f.as_polynomial()->polys()[q].scaled(c);
    return SymmetricTensorField::polynomial(m, std::move(comps));
  }
  std::vector<std::pair<double, std::shared_ptr<const FieldModel>>> parts;
  for (const auto& [c, f] : terms) parts.emplace_back(c, f.model_ptr());
  return SymmetricTensorField(std::make_shared<const CombinationModel>(std::move(parts)));
}

SymmetricTensorField symmetrize(const GeneralTensorField& h) {
  SymmetricTensorField::check_order(h.order);
  if (static_cast<int>(h.entries.size()) != (1 << h.order))
    throw std::invalid_argument("general tensor needs 2^order entries");
  std::vector<Polynomial> comps(static_cast<std::size_t>(h.order) + 1);
  for (int idx = 0; idx < (1 << h.order); ++idx) {
    const int q = std::popcount(static_cast<unsigned>(idx));
    comps[q] = comps[q] + h.entries[idx].scaled(1.0 / binomial(h.order, q));
  }
  return SymmetricTensorField::polynomial(h.order, std::move(comps));
}

SymmetricTensorField sym_cov_derivative(const SymmetricTensorField& p, const MetricField& metric) {
  SymmetricTensorField::check_order(p.order() + 1);
  return SymmetricTensorField(std::make_shared<const GaugeModel>(p, metric));
}

SymmetricTensorField trace(const SymmetricTensorField& f, const MetricField& metric) {
  if (f.order() < 2) throw OrderTooLow("trace needs a field of order >= 2");
  return SymmetricTensorField(std::make_shared<const TraceModel>(f, metric));
}

std::vector<SymmetricTensorField> trace_free_decompose(const SymmetricTensorField& f, const MetricField& metric) {
  const int m = f.order();
  if (m > kMaxOrder) throw UnsupportedOrder("trace-free decomposition implemented for order <= 4");
  std::vector<SymmetricTensorField> out;
  for (int j = 0; 2 * j <= m; ++j) {
    auto part = [f, metric, m, j](const Vec2<double>& x) {
      return decompose_point(m, f.at(x), metric.g(x))[j];
    };
    out.push_back(SymmetricTensorField::from_function<0>(m - 2 * j, part));
  }
  return out;
}

Components<double> recompose_point(const std::vector<SymmetricTensorField>& parts, const MetricField& metric,
                                   const Vec2<double>& x) {
  const int m = parts.front().order();
  Mat2<double> g = metric.g(x);
  Components<double> s = zero_components<double>();
  for (int j = 0; j < static_cast<int>(parts.size()); ++j) {
    Components<double> lifted = raise_by_metric(g, j, m - 2 * j, parts[j].at(x));
    for (int q = 0; q <= m; ++q) s[q] += lifted[q];
  }
  return s;
}

double lambda_eval(const SymmetricTensorField& f, const metric::PhasePoint& z) { return f.lambda(z.x, z.v); }

SymmetricTensorField potential_field(int order, const std::vector<Polynomial>& q) {
  if (static_cast<int>(q.size()) != order + 1) throw std::invalid_argument("potential needs order + 1 components");
  std::vector<Polynomial> comps;
  for (const Polynomial& c : q) comps.push_back(Polynomial::boundary_factor() * c);
  return SymmetricTensorField::polynomial(order, std::move(comps));
}

SymmetricTensorField random_polynomial_field(int order, int degree, std::mt19937_64& rng, double scale) {
  std::vector<Polynomial> comps;
  for (int q = 0; q <= order; ++q) comps.push_back(random_polynomial(rng, degree, scale));
  return SymmetricTensorField::polynomial(order, std::move(comps));
}

SymmetricTensorField random_potential(int order, int degree, std::mt19937_64& rng, double scale) {
  std::vector<Polynomial> q;
  for (int c = 0; c <= order; ++c) q.push_back(random_polynomial(rng, degree, scale));
  return potential_field(order, q);
}

DiskNodes disk_nodes(const DiskQuadrature& q) {
  QuadratureRule radial = gauss_legendre(q.n_radial, 0.0, 1.0);
  DiskNodes out;
  const double dphi = 2.0 * std::numbers::pi / q.n_angular;
  for (int i = 0; i < q.n_radial; ++i)
    for (int j = 0; j < q.n_angular; ++j) {
      const double r = radial.nodes[i];
      const double phi = dphi * (j + 0.5);
      out.x1.push_back(r * std::cos(phi));
      out.x2.push_back(r * std::sin(phi));
      out.w.push_back(radial.weights[i] * r * dphi);
    }
  return out;
}

double l2_inner_tensor(const SymmetricTensorField& f, const SymmetricTensorField& h, const MetricField& metric,
                       const DiskQuadrature& q) {
  if (f.order() != h.order()) throw OrderMismatch("L2 inner product of fields with different orders");
  const DiskNodes nodes = disk_nodes(q);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.w.size(); ++i) {
    Vec2<double> x{nodes.x1[i], nodes.x2[i]};
    Mat2<double> g = metric.g(x);
    s += nodes.w[i] * std::sqrt(det(g)) * metric_inner(f.order(), f.at(x), h.at(x), inverse(g));
  }
  return s;
}

SymmetricTensorField field_from_json(const nlohmann::json& j) {
  try {
    const int order = j.at("order").get<int>();
    SymmetricTensorField::check_order(order);
    std::vector<Polynomial> comps(static_cast<std::size_t>(order) + 1);
    std::vector<bool> seen(comps.size(), false);
    if (j.contains("components")) {
      for (const auto& [key, terms] : j.at("components").items()) {
        std::string idx = key;
        if (order == 0 && (idx == "scalar" || idx == "0")) idx.clear();
        if (static_cast<int>(idx.size()) != order ||
            idx.find_first_not_of("12") != std::string::npos)
          throw ConfigError("component key '" + key + "' does not name an order-" + std::to_string(order) + " index");
        const int q = static_cast<int>(std::count(idx.begin(), idx.end(), '2'));
        if (seen[q]) throw ConfigError("component '" + key + "' given twice up to index permutation");
        seen[q] = true;
        std::vector<Term> parsed;
        for (const auto& t : terms) {
          if (!t.is_array() || t.size() != 3) throw ConfigError("polynomial terms are [coeff, p1, p2]");
          parsed.push_back({t[0].get<double>(), t[1].get<int>(), t[2].get<int>()});
        }
        comps[q] = Polynomial(std::move(parsed));
      }
    }
    return SymmetricTensorField::polynomial(order, std::move(comps));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed tensor field: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("malformed tensor field: ") + e.what());
  }
}

nlohmann::json field_to_json(const SymmetricTensorField& f) {
  const PolynomialModel* poly = f.as_polynomial();
  if (poly == nullptr) throw UsageError("only polynomial tensor fields serialize to JSON");
  nlohmann::json j;
  j["order"] = f.order();
  nlohmann::json comps = nlohmann::json::object();
  for (int q = 0; q <= f.order(); ++q) {
    std::string key = std::string(f.order() - q, '1') + std::string(q, '2');
    nlohmann::json terms = nlohmann::json::array();
    for (const Term& t : poly->polys()[q].terms()) terms.push_back({t.coeff, t.p1, t.p2});
    comps[key] = terms;
  }
  j["components"] = comps;
  return j;
}

SymmetricTensorField read_field_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tensor field file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
  return field_from_json(j);
}

}  // namespace xrt::tensor
