#pragma once

// Degree chain of a function known only through fiber samples, typically
// the integral function u^f. Fibers are cached at every grid node and at the
// four points x ± h e_j, so X u_k follows from central differences of the
// degree-k projections without re-tracing rays per degree.

#include "xrt/verify/checks.hpp"

namespace xrt::verify {

class TransportStencil {
 public:
  // ConfigError when a shifted point leaves the closed disk.
  TransportStencil(const sm::SMFunction& u, const MetricField& metric, GridPtr grid, double step = 1e-4);

  const GridPtr& grid() const { return grid_; }
  const sm::SMSamples& center() const { return center_; }
  // X u_k split into degrees k + 1 and k − 1.
  sm::XPlusMinus x_split(int k) const;

 private:
  MetricField metric_;
  GridPtr grid_;
  double step_;
  sm::SMSamples center_;
  std::array<sm::SMSamples, 4> shifted_;  // +e1, −e1, +e2, −e2
};

struct ChainOptions {
  std::vector<int> degrees{2, 4};
  std::vector<int> lengths{1, 2};
  double equality_tol = 2e-3;
  double inequality_tol = 1e-6;
};

// For u = u^f with f of order m and If = 0, k ≥ m, k ≡ m (mod 2):
//   ‖X₊u_k‖² = ‖X₋u_{k+2}‖²,
//   ‖X₋u_k‖² ≤ C(2, k) ‖X₊u_k‖²,
//   ‖X₊u_k‖² ≤ B(2, l, k) ‖X₊u_{k+2l}‖².
// Residuals are normalized by ‖λf‖²_{L²(SM)} = `scale`.
std::vector<CheckEntry> check_l2_chain(const TransportStencil& u, int order, double scale,
                                       const ChainOptions& options, const std::string& label);

// max over k ≡ m (mod 2) of ‖u_k‖ / ‖u‖.
CheckEntry check_parity(const sm::SMSamples& u, int order, double tol, const std::string& label,
                        Expectation expected = Expectation::pass);

}  // namespace xrt::verify
