#pragma once

// Least-squares splitting f = f_s + σ∇p over a finite potential space whose
// elements vanish on the boundary circle. "Solenoidal" means L²-orthogonal to
// σ∇ of every basis element under the disk quadrature used for assembly.

#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "xrt/tensor/field.hpp"
#include "xrt/transform/xray.hpp"

namespace xrt::solver {

using metric::MetricField;
using tensor::SymmetricTensorField;

// (1 − |x|²) x1^p1 x2^p2 placed in symmetric component `component`.
struct BasisElement {
  int component = 0;
  int p1 = 0;
  int p2 = 0;
};

class PotentialBasis {
 public:
  // Every component times every monomial of total degree ≤ degree.
  PotentialBasis(int order, int degree);
  // Explicit element list; repeats are allowed and make the system singular.
  PotentialBasis(int order, std::vector<BasisElement> elements);

  int order() const { return order_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<BasisElement>& elements() const { return elements_; }

  SymmetricTensorField element(int i) const;
  // Σ c_i q_i; c.size() == size().
  SymmetricTensorField combine(std::span<const double> c) const;

 private:
  int order_;
  std::vector<BasisElement> elements_;
};

struct SolverOptions {
  tensor::DiskQuadrature quadrature{};
  // Dense QR of the weighted design matrix below this dimension; Jacobi-
  // preconditioned CG on the normal equations at or above it.
  int dense_limit = 2000;
  double cg_tolerance = 1e-10;
  int max_iterations = 10000;
  // Elements with ‖σ∇q‖² ≤ filter · max_j ‖σ∇q_j‖² are dropped before solving.
  double filter = 1e-24;
  // QR pivots below this fraction of the largest count as zero.
  double rank_tolerance = 1e-10;
};

struct SolverDiagnostics {
  std::string method;  // "dense_qr" or "cg"
  int dimension = 0;   // basis size before filtering
  int rank = 0;        // elements kept
  double condition = 0.0;  // Gram condition estimate
  int iterations = 0;
  // max_q |⟨f_s, σ∇q⟩| / (‖f‖ ‖σ∇q‖); 0 for f ≡ 0.
  double orthogonality = 0.0;
};

struct DecompositionResult {
  int order = 0;  // order of f
  std::vector<double> coefficients;  // one per basis element, 0 when filtered
  std::vector<bool> filtered;
  SymmetricTensorField potential;
  SymmetricTensorField solenoidal;
  double field_norm = 0.0;
  double solenoidal_norm = 0.0;
  double potential_norm = 0.0;  // ‖σ∇p‖
  std::optional<double> transform_discrepancy;  // ‖If_s − If‖ on a fan
  SolverDiagnostics diagnostics;
};

// RankDeficient if the filtered Gram matrix is singular; NoConvergence when
// CG hits its iteration cap; ConfigError for order-0 fields.
DecompositionResult solve_potential(const SymmetricTensorField& f, const MetricField& metric,
                                    const PotentialBasis& basis, const SolverOptions& options = {});

// Fills transform_discrepancy from transforms of f and f_s on the fan.
void attach_transform_discrepancy(DecompositionResult& result, const SymmetricTensorField& f,
                                  const MetricField& metric, const transform::BoundaryFan& fan,
                                  const metric::GeodesicOptions& options = {});

// max over interior samples of the rays started at `starts` of
// |d/dt(−λp)(φ_t z) + λf(φ_t z)|, with d/dt a central difference on the
// integrator samples.
double transport_residual(const SymmetricTensorField& p, const SymmetricTensorField& f, const MetricField& metric,
                          const std::vector<metric::PhasePoint>& starts,
                          const metric::GeodesicOptions& options = {});

// max over basis q of max_fan |I(f + σ∇q) − I(f)| / ‖q‖_{L²}.
double gauge_invariance(const SymmetricTensorField& f, const MetricField& metric, const PotentialBasis& basis,
                        const transform::BoundaryFan& fan, const metric::GeodesicOptions& options = {});

struct KernelTestOptions {
  int trials = 20;
  int directions = 5;  // solenoidal-only fields for the lower-bound constant
  int field_degree = 3;
  double gauge_tol = 1e-5;
  double recovery_tol = 1e-2;
  double intercept_tol = 1e-3;
  SolverOptions solver{};
  metric::GeodesicOptions geodesic{};
};

struct KernelTrial {
  double scale = 0.0;              // weight of the solenoidal part
  double gauge_norm = 0.0;         // ‖I(σ∇p*)‖
  double transform_norm = 0.0;     // ‖If‖
  double solenoidal_norm = 0.0;    // recovered ‖f_s‖
  double recovery_error = 0.0;     // ‖f_s − f_s*‖ / max(‖f_s*‖, ‖f‖)
};

struct KernelTestResult {
  std::vector<KernelTrial> trials;
  double slope = 0.0;      // least-squares fit ‖f_s‖ ≈ slope ‖If‖ + intercept
  double intercept = 0.0;
  double lower_bound = 0.0;  // min over solenoidal-only fields of ‖If_s*‖ / ‖f_s*‖
  double max_gauge = 0.0;
  double max_recovery_error = 0.0;
  bool gauge_ok = false;
  bool recovery_ok = false;
  bool intercept_ok = false;
  bool passed() const { return gauge_ok && recovery_ok && intercept_ok; }
};

// Trial i uses f = σ∇p_i + t_i s with fresh p_i, one fixed unit solenoidal
// s, t_i = i / (trials − 1) and ‖σ∇p_i‖ = 1. Field order is basis.order() + 1.
KernelTestResult kernel_test(const MetricField& metric, const transform::BoundaryFan& fan,
                             const PotentialBasis& basis, std::mt19937_64& rng, const KernelTestOptions& options = {});

nlohmann::json to_json(const DecompositionResult& result);
nlohmann::json to_json(const KernelTestResult& result);

}  // namespace xrt::solver
