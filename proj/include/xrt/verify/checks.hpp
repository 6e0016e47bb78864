#pragma once

// Numerical checks of the transport-equation identities on SM for n = 2.
//
// Test functions are trigonometric polynomials in α with polynomial
// coefficients. X and H act through level-1 derivatives (or the
// finite-difference route); ∂_α acts in closed form on the input and
// spectrally on sampled results, which is exact because X and H raise the
// fiber degree by at most 3.
//
// Norm-valued entries report lhs = ‖A‖, rhs = ‖B‖ and residual
// ‖A − B‖ / max(‖A‖, ‖B‖, ‖u‖).

#include <memory>
#include <string>
#include <vector>

#include "xrt/sphere/grid.hpp"
#include "xrt/transform/xray.hpp"
#include "xrt/verify/report.hpp"

namespace xrt::verify {

using metric::MetricField;
using sm::Derivatives;
using sm::SMGrid;
using sm::TrigPolynomial;
using GridPtr = std::shared_ptr<const SMGrid>;

// [X, V] = −H, HV − VH = X, [X, Δv] = 2VH + X on u, and [X, V] = −H on a
// section with normal component w.
std::vector<CheckEntry> check_commutators(const MetricField& metric, const TrigPolynomial& u,
                                          const TrigPolynomial& w, const GridPtr& grid, Derivatives mode,
                                          double tol, const std::string& label);

// For u of pure degree k: [X₊, Δv]u = −(2k + 1) X₊u and [X₋, Δv]u = (2k − 1) X₋u.
std::vector<CheckEntry> check_degree_commutators(const MetricField& metric, const TrigPolynomial& u, int k,
                                                 const GridPtr& grid, Derivatives mode, double tol,
                                                 const std::string& label);

// ‖VXu‖² = ‖XVu‖² − ∫K (Vu)² + ‖Xu‖² for u vanishing on the boundary.
CheckEntry check_pestov(const MetricField& metric, const TrigPolynomial& u, const GridPtr& grid, double tol,
                        const std::string& label);

// ⟨Xu, [X, Δv]u⟩ ≤ 0, residual normalized by ‖Xu‖².
CheckEntry check_pestov_inequality(const MetricField& metric, const TrigPolynomial& u, const GridPtr& grid,
                                   double tol, const std::string& label,
                                   Expectation expected = Expectation::pass);

// d²‖Xu‖² ≥ ‖u‖² and the same for a section with normal component w;
// residuals normalized by ‖u‖², ‖w‖².
std::vector<CheckEntry> check_friedrichs(const MetricField& metric, const TrigPolynomial& u,
                                         const TrigPolynomial& w, double diameter, const GridPtr& grid, double tol,
                                         const std::string& label);

// Q(W) = ‖XW‖² − ∫K |W⊥|² ≥ ‖W‖² / d², residual normalized by ‖W‖².
CheckEntry check_index_form(const MetricField& metric, const TrigPolynomial& w, double diameter,
                            const GridPtr& grid, double tol, const std::string& label);

// Σ_k (‖X₊u_k‖² + ‖X₋u_k‖²) ≤ ‖Xu‖² + ‖Hu‖², residual normalized by the
// right-hand side.
CheckEntry check_xpm_bound(const MetricField& metric, const TrigPolynomial& u, const GridPtr& grid, double tol,
                           const std::string& label);

// Divergence of the flow in raw (x, v) coordinates,
//   Σ_i ∂_{x^i}(v^i |g|) − ∂_{v^i}(Γ^i_{jk} v^j v^k |g|),
// by central differences with step h.
double liouville_density(const MetricField& metric, const Vec2<double>& x, const Vec2<double>& v,
                         double h = 1e-6);
// Variant with alternating signs over i:
//   Σ_i (−1)^{i−1}(∂_{x^i}(v^i |g|) − ∂_{v^i}(Γ^i_{jk} v^j v^k |g|)).
double liouville_density_alternating(const MetricField& metric, const Vec2<double>& x, const Vec2<double>& v,
                                     double h = 1e-6);

// |∫ u ρ dΣ| ≤ tol ‖u‖_{L¹} with ρ the flow divergence at v of angle α.
CheckEntry check_liouville(const MetricField& metric, const sm::SMFunction& u, const GridPtr& grid, double tol,
                           const std::string& label);

struct NormIdentityResult {
  std::vector<double> ratios;  // ‖λf‖_{L²(SM)} / ‖f‖_{L²(M)} per field
  double mean = 0.0;
  double spread = 0.0;  // (max − min) / mean
};
// Fields must be trace-free; ‖f‖_{L²(M)} uses the disk rule matching the grid.
NormIdentityResult norm_ratios(const MetricField& metric, const std::vector<tensor::SymmetricTensorField>& fields,
                               const GridPtr& grid);
CheckEntry check_norm_identity(const MetricField& metric, const std::vector<tensor::SymmetricTensorField>& fields,
                               const GridPtr& grid, double tol, const std::string& label);

// Exact sweep over n ∈ [2, 4], k ≤ k_max, l ≤ l_max.
CheckEntry check_constant_bound(int k_max, int l_max, double tol);

// ∫_SM F dΣ on the grid against the fan quadrature of Santaló's formula,
// one entry per integrand; residual relative to max of the two values.
std::vector<CheckEntry> check_santalo(const MetricField& metric, const std::vector<sm::SMFunction>& F,
                                      const std::vector<std::string>& labels, const GridPtr& grid,
                                      const transform::BoundaryFan& fan, const metric::GeodesicOptions& options,
                                      double tol);

}  // namespace xrt::verify
