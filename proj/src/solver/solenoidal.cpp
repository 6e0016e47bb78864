#include "xrt/solver/solenoidal.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/QR>
#include <nlohmann/json.hpp>

namespace xrt::solver {

using tensor::Components;
using tensor::Polynomial;

PotentialBasis::PotentialBasis(int order, int degree) : order_(order) {
  SymmetricTensorField::check_order(order);
  if (degree < 0) throw ConfigError("potential basis degree must be nonnegative");
  for (int q = 0; q <= order; ++q)
    for (int d = 0; d <= degree; ++d)
      for (int p2 = 0; p2 <= d; ++p2) elements_.push_back({q, d - p2, p2});
}

PotentialBasis::PotentialBasis(int order, std::vector<BasisElement> elements)
    : order_(order), elements_(std::move(elements)) {
  SymmetricTensorField::check_order(order);
  for (const BasisElement& e : elements_)
    if (e.component < 0 || e.component > order || e.p1 < 0 || e.p2 < 0)
      throw ConfigError("basis element outside the component range or with a negative power");
}

SymmetricTensorField PotentialBasis::element(int i) const {
  const BasisElement& e = elements_.at(static_cast<std::size_t>(i));
  std::vector<Polynomial> q(static_cast<std::size_t>(order_) + 1);
  q[e.component] = Polynomial::monomial(1.0, e.p1, e.p2);
  return tensor::potential_field(order_, q);
}

SymmetricTensorField PotentialBasis::combine(std::span<const double> c) const {
  if (static_cast<int>(c.size()) != size()) throw std::invalid_argument("one coefficient per basis element is required");
  std::vector<Polynomial> q(static_cast<std::size_t>(order_) + 1);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0.0) {
      const BasisElement& e = elements_[i];
      q[e.component] = q[e.component] + Polynomial::monomial(c[i], e.p1, e.p2);
    }
  return tensor::potential_field(order_, q);
}

namespace {

// Weighted node rows: for a field h of order m, row block n holds
// sqrt(w_n √det g) Lᵀ h(x_n), where L Lᵀ is the component inner-product
// matrix at x_n. Euclidean dot products of row vectors are L² inner products.
class WeightedRows {
 public:
  WeightedRows(const MetricField& metric, int order, const tensor::DiskQuadrature& q)
      : order_(order), nodes_(tensor::disk_nodes(q)) {
    const int c = order + 1;
    for (std::size_t n = 0; n < nodes_.w.size(); ++n) {
      const Vec2<double> x{nodes_.x1[n], nodes_.x2[n]};
      const Mat2<double> g = metric.g(x);
      const auto p = tensor::inner_matrix(order, inverse(g));
      Eigen::MatrixXd pm(c, c);
      for (int a = 0; a < c; ++a)
        for (int b = 0; b < c; ++b) pm(a, b) = p[a][b];
      const Eigen::MatrixXd lt = pm.llt().matrixU();
      factors_.push_back(std::sqrt(nodes_.w[n] * std::sqrt(det(g))) * lt);
    }
  }

  Eigen::Index rows() const { return static_cast<Eigen::Index>(nodes_.w.size()) * (order_ + 1); }

  Eigen::VectorXd rows_of(const SymmetricTensorField& h) const {
    const int c = order_ + 1;
    Eigen::VectorXd out(rows());
    Eigen::VectorXd comp(c);
    for (std::size_t n = 0; n < nodes_.w.size(); ++n) {
      const Components<double> v = h.at(Vec2<double>{nodes_.x1[n], nodes_.x2[n]});
      for (int a = 0; a < c; ++a) comp(a) = v[a];
      out.segment(static_cast<Eigen::Index>(n) * c, c) = factors_[n] * comp;
    }
    return out;
  }

 private:
  int order_;
  tensor::DiskNodes nodes_;
  std::vector<Eigen::MatrixXd> factors_;
};

double ratio_of_extremes(const Eigen::VectorXd& d) {
  const double hi = d.cwiseAbs().maxCoeff(), lo = d.cwiseAbs().minCoeff();
  return lo > 0.0 ? hi / lo : INFINITY;
}

}  // namespace

DecompositionResult solve_potential(const SymmetricTensorField& f, const MetricField& metric,
                                    const PotentialBasis& basis, const SolverOptions& options) {
  if (f.order() < 1) throw ConfigError("solenoidal decomposition needs a field of order at least 1");
  if (basis.order() + 1 != f.order()) throw OrderMismatch("potential basis order must be the field order minus one");
  const int n = basis.size();
  const WeightedRows rows(metric, f.order(), options.quadrature);

  Eigen::MatrixXd design(rows.rows(), n);
  for (int i = 0; i < n; ++i) design.col(i) = rows.rows_of(tensor::sym_cov_derivative(basis.element(i), metric));
  const Eigen::VectorXd target = rows.rows_of(f);

  DecompositionResult out;
  out.order = f.order();
  out.coefficients.assign(static_cast<std::size_t>(n), 0.0);
  out.filtered.assign(static_cast<std::size_t>(n), false);
  out.diagnostics.dimension = n;

  const Eigen::VectorXd col_sq = design.colwise().squaredNorm();
  const double col_max = n > 0 ? col_sq.maxCoeff() : 0.0;
  std::vector<int> kept;
  for (int i = 0; i < n; ++i) {
    if (col_sq(i) <= options.filter * col_max || col_sq(i) == 0.0) out.filtered[i] = true;
    else kept.push_back(i);
  }
  const int r = static_cast<int>(kept.size());
  out.diagnostics.rank = r;
  Eigen::MatrixXd a(design.rows(), r);
  for (int j = 0; j < r; ++j) a.col(j) = design.col(kept[j]);

  Eigen::VectorXd c = Eigen::VectorXd::Zero(r);
  if (r > 0 && r < options.dense_limit) {
    out.diagnostics.method = "dense_qr";
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.rows(), a.cols());
    qr.setThreshold(options.rank_tolerance);
    qr.compute(a);
    if (qr.rank() < r)
      throw RankDeficient("potential basis is rank deficient: rank " + std::to_string(qr.rank()) + " of " +
                          std::to_string(r) + " after filtering");
    c = qr.solve(target);
    const Eigen::VectorXd diag = qr.matrixQR().diagonal();
    const double k = ratio_of_extremes(diag);
    out.diagnostics.condition = k * k;
  } else if (r > 0) {
    out.diagnostics.method = "cg";
    const Eigen::MatrixXd gram = a.transpose() * a;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> check(gram.rows(), gram.cols());
    check.setThreshold(options.rank_tolerance * options.rank_tolerance);
    check.compute(gram);
    if (check.rank() < r)
      throw RankDeficient("potential Gram matrix is singular: rank " + std::to_string(check.rank()) + " of " +
                          std::to_string(r));
    out.diagnostics.condition = ratio_of_extremes(check.matrixQR().diagonal());
    Eigen::ConjugateGradient<Eigen::MatrixXd, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
    cg.setTolerance(options.cg_tolerance);
    cg.setMaxIterations(options.max_iterations);
    cg.compute(gram);
    c = cg.solve(a.transpose() * target);
    out.diagnostics.iterations = static_cast<int>(cg.iterations());
    if (cg.info() != Eigen::Success)
      throw NoConvergence("conjugate gradients stopped after " + std::to_string(cg.iterations()) +
                          " iterations at relative residual " + std::to_string(cg.error()));
  } else {
    out.diagnostics.method = "empty";
  }
  for (int j = 0; j < r; ++j) out.coefficients[kept[j]] = c(j);

  out.potential = basis.combine(out.coefficients);
  const SymmetricTensorField grad = tensor::sym_cov_derivative(out.potential, metric);
  out.solenoidal = f - grad;

  // Norms and orthogonality are measured on the assembled fields, not on the
  // least-squares residual vector.
  const Eigen::VectorXd fs = rows.rows_of(out.solenoidal);
  out.field_norm = target.norm();
  out.solenoidal_norm = fs.norm();
  out.potential_norm = rows.rows_of(grad).norm();
  double worst = 0.0;
  if (out.field_norm > 0.0)
    for (int i = 0; i < n; ++i) {
      if (col_sq(i) == 0.0) continue;
      worst = std::max(worst, std::abs(fs.dot(design.col(i))) / (out.field_norm * std::sqrt(col_sq(i))));
    }
  out.diagnostics.orthogonality = worst;
  return out;
}

void attach_transform_discrepancy(DecompositionResult& result, const SymmetricTensorField& f,
                                  const MetricField& metric, const transform::BoundaryFan& fan,
                                  const metric::GeodesicOptions& options) {
  const auto data = transform::xray_transform_batch({f, result.solenoidal}, metric, fan, options);
  transform::XrayData diff = data[0];
  for (std::size_t i = 0; i < diff.size(); ++i) diff.value[i] = data[1].value[i] - data[0].value[i];
  result.transform_discrepancy = transform::xray_norm(diff, fan);
}

double transport_residual(const SymmetricTensorField& p, const SymmetricTensorField& f, const MetricField& metric,
                          const std::vector<metric::PhasePoint>& starts, const metric::GeodesicOptions& options) {
  if (p.order() + 1 != f.order()) throw OrderMismatch("potential order must be the field order minus one");
  metric::GeodesicOptions opts = options;
  opts.keep_samples = true;
  double worst = 0.0;
  std::vector<double> x1, x2, v1, v2, lp, lf;
  for (const metric::PhasePoint& z : starts) {
    const metric::GeodesicPath path = metric::geodesic_integrate(metric, z, opts);
    const int count = path.full_steps + 1;  // uniformly spaced samples
    if (count < 3) continue;
    x1.resize(count);
    x2.resize(count);
    v1.resize(count);
    v2.resize(count);
    lp.resize(count);
    lf.resize(count);
    for (int i = 0; i < count; ++i) {
      const auto& s = path.samples[i];
      x1[i] = s.x[0];
      x2[i] = s.x[1];
      v1[i] = s.v[0];
      v2[i] = s.v[1];
    }
    const tensor::PhaseBatch batch{x1, x2, v1, v2};
    p.lambda_batch(batch, lp);
    f.lambda_batch(batch, lf);
    for (int i = 1; i + 1 < count; ++i) {
      const double dt = -(lp[i + 1] - lp[i - 1]) / (2.0 * path.step);
      worst = std::max(worst, std::abs(dt + lf[i]));
    }
  }
  return worst;
}

double gauge_invariance(const SymmetricTensorField& f, const MetricField& metric, const PotentialBasis& basis,
                        const transform::BoundaryFan& fan, const metric::GeodesicOptions& options) {
  if (basis.order() + 1 != f.order()) throw OrderMismatch("potential basis order must be the field order minus one");
  std::vector<SymmetricTensorField> fields{f};
  std::vector<double> norms;
  for (int i = 0; i < basis.size(); ++i) {
    const SymmetricTensorField q = basis.element(i);
    fields.push_back(f + tensor::sym_cov_derivative(q, metric));
    norms.push_back(std::sqrt(tensor::l2_inner_tensor(q, q, metric)));
  }
  const auto data = transform::xray_transform_batch(fields, metric, fan, options);
  double worst = 0.0;
  for (int i = 0; i < basis.size(); ++i) {
    double d = 0.0;
    for (std::size_t k = 0; k < data[0].size(); ++k)
      if (!data[0].failed[k]) d = std::max(d, std::abs(data[i + 1].value[k] - data[0].value[k]));
    worst = std::max(worst, d / norms[i]);
  }
  return worst;
}

namespace {

double field_norm(const SymmetricTensorField& f, const MetricField& metric, const tensor::DiskQuadrature& q) {
  return std::sqrt(tensor::l2_inner_tensor(f, f, metric, q));
}

SymmetricTensorField unit_solenoidal(const MetricField& metric, const PotentialBasis& basis, std::mt19937_64& rng,
                                     const KernelTestOptions& options) {
  const SymmetricTensorField g = tensor::random_polynomial_field(basis.order() + 1, options.field_degree, rng);
  const DecompositionResult d = solve_potential(g, metric, basis, options.solver);
  if (d.solenoidal_norm == 0.0) throw NumericalError("random field lies in the potential span");
  return d.solenoidal.scaled(1.0 / d.solenoidal_norm);
}

}  // namespace

KernelTestResult kernel_test(const MetricField& metric, const transform::BoundaryFan& fan,
                             const PotentialBasis& basis, std::mt19937_64& rng, const KernelTestOptions& options) {
  if (options.trials < 2) throw ConfigError("kernel test needs at least two trials");
  if (options.directions < 1) throw ConfigError("kernel test needs at least one solenoidal direction");
  const tensor::DiskQuadrature& quad = options.solver.quadrature;
  std::vector<SymmetricTensorField> directions;
  for (int j = 0; j < options.directions; ++j) directions.push_back(unit_solenoidal(metric, basis, rng, options));
  const SymmetricTensorField& s = directions.front();

  std::normal_distribution<double> normal;
  std::vector<SymmetricTensorField> gauges, fields;
  std::vector<double> scales;
  for (int i = 0; i < options.trials; ++i) {
    std::vector<double> c(static_cast<std::size_t>(basis.size()));
    for (double& v : c) v = normal(rng);
    const SymmetricTensorField grad = tensor::sym_cov_derivative(basis.combine(c), metric);
    gauges.push_back(grad.scaled(1.0 / field_norm(grad, metric, quad)));
    scales.push_back(static_cast<double>(i) / (options.trials - 1));
    fields.push_back(gauges.back() + s.scaled(scales.back()));
  }

  std::vector<SymmetricTensorField> all = gauges;
  all.insert(all.end(), fields.begin(), fields.end());
  all.insert(all.end(), directions.begin(), directions.end());
  const auto data = transform::xray_transform_batch(all, metric, fan, options.geodesic);
  const int t = options.trials;

  KernelTestResult out;
  out.lower_bound = INFINITY;
  for (int j = 0; j < options.directions; ++j)
    out.lower_bound = std::min(out.lower_bound, transform::xray_norm(data[2 * t + j], fan));
  for (int i = 0; i < t; ++i) {
    KernelTrial tr;
    tr.scale = scales[i];
    tr.gauge_norm = transform::xray_norm(data[i], fan);
    tr.transform_norm = transform::xray_norm(data[t + i], fan);
    const DecompositionResult d = solve_potential(fields[i], metric, basis, options.solver);
    tr.solenoidal_norm = d.solenoidal_norm;
    const double err = field_norm(d.solenoidal - s.scaled(tr.scale), metric, quad);
    tr.recovery_error = err / std::max(tr.scale, d.field_norm);
    out.max_gauge = std::max(out.max_gauge, tr.gauge_norm);
    out.max_recovery_error = std::max(out.max_recovery_error, tr.recovery_error);
    out.trials.push_back(tr);
  }

  double mx = 0.0, my = 0.0;
  for (const KernelTrial& tr : out.trials) {
    mx += tr.transform_norm;
    my += tr.solenoidal_norm;
  }
  mx /= t;
  my /= t;
  double sxy = 0.0, sxx = 0.0;
  for (const KernelTrial& tr : out.trials) {
    sxy += (tr.transform_norm - mx) * (tr.solenoidal_norm - my);
    sxx += (tr.transform_norm - mx) * (tr.transform_norm - mx);
  }
  out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  out.intercept = my - out.slope * mx;
  out.gauge_ok = out.max_gauge <= options.gauge_tol;
  out.recovery_ok = out.max_recovery_error <= options.recovery_tol;
  out.intercept_ok = std::abs(out.intercept) <= options.intercept_tol;
  return out;
}

nlohmann::json to_json(const DecompositionResult& r) {
  nlohmann::json j;
  j["order"] = r.order;
  j["coefficients"] = r.coefficients;
  j["filtered"] = r.filtered;
  j["field_norm"] = r.field_norm;
  j["solenoidal_norm"] = r.solenoidal_norm;
  j["potential_norm"] = r.potential_norm;
  j["transform_discrepancy"] = r.transform_discrepancy ? nlohmann::json(*r.transform_discrepancy) : nlohmann::json();
  const SolverDiagnostics& d = r.diagnostics;
  j["diagnostics"] = {{"method", d.method},       {"dimension", d.dimension},   {"rank", d.rank},
                      {"condition", std::isfinite(d.condition) ? nlohmann::json(d.condition) : nlohmann::json()},
                      {"iterations", d.iterations}, {"orthogonality", d.orthogonality}};
  j["potential"] = tensor::field_to_json(r.potential);
  return j;
}

nlohmann::json to_json(const KernelTestResult& r) {
  nlohmann::json trials = nlohmann::json::array();
  for (const KernelTrial& t : r.trials)
    trials.push_back({{"scale", t.scale},
                      {"gauge_norm", t.gauge_norm},
                      {"transform_norm", t.transform_norm},
                      {"solenoidal_norm", t.solenoidal_norm},
                      {"recovery_error", t.recovery_error}});
  return {{"trials", trials},
          {"slope", r.slope},
          {"intercept", r.intercept},
          {"lower_bound", r.lower_bound},
          {"max_gauge", r.max_gauge},
          {"max_recovery_error", r.max_recovery_error},
          {"gauge_ok", r.gauge_ok},
          {"recovery_ok", r.recovery_ok},
          {"intercept_ok", r.intercept_ok},
          {"passed", r.passed()}};
}

}  // namespace xrt::solver
