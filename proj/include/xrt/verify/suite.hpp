#pragma once

// Check selection, tolerances and the suite runner. Each check draws its
// inputs from its own generator seeded by (seed, check index), so a check's
// inputs do not depend on which other checks run.

#include <cstdint>
#include <string>
#include <vector>

#include "xrt/verify/chain.hpp"

namespace xrt::verify {

struct ToleranceConfig {
  sm::SMGridSpec grid{24, 48, 64};
  // u^f is traced at 5 points per node and fiber angle.
  sm::SMGridSpec chain_grid{10, 20, 32};
  double chain_step = 1e-4;
  transform::FanSpec fan{128, 32, 1e-3};
  metric::GeodesicOptions geodesic{};
  int samples = 5;           // test functions per identity check
  int bound_samples = 10;    // Friedrichs and index form
  int norm_fields = 10;      // fields per order in the norm identity
  int chain_order = 2;
  std::uint64_t seed = 1;

  double commutator_ad = 1e-6;
  double commutator_fd = 1e-4;
  double degree_ad = 1e-8;
  double degree_fd = 1e-4;
  double pestov = 1e-3;
  double pestov_inequality = 1e-6;
  double chain_equality = 2e-3;
  double chain_inequality = 1e-6;
  double parity = 1e-4;
  double friedrichs = 1e-6;
  double index_form = 1e-6;
  double liouville = 1e-3;
  double norm_identity = 1e-6;
  double constant_bound = 1e-12;
  double santalo = 1e-3;
  double xpm_bound = 1e-6;

  // ConfigError on non-positive tolerances or invalid grids.
  void validate() const;
};

// Canonical order; "all" selects every entry.
const std::vector<std::string>& check_names();
// Expands "all", drops duplicates, keeps canonical order; ConfigError on
// unknown names.
std::vector<std::string> resolve_selection(const std::vector<std::string>& selection);

VerificationReport run_suite(const MetricField& metric, const std::vector<std::string>& selection,
                             const ToleranceConfig& config);

// Fixed positive-curvature input on which ⟨Xu, [X, Δv]u⟩ > 0.
MetricField positive_curvature_control_metric();
sm::TrigPolynomial positive_curvature_control_function();

}  // namespace xrt::verify
