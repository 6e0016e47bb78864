#pragma once

// Run configuration for the command-line front end. A TOML file is parsed
// into RunConfig, command-line overrides are applied on top, and the result
// is hashed through its canonical JSON form so that every artifact names the
// exact configuration that produced it.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xrt/solver/solenoidal.hpp"
#include "xrt/verify/suite.hpp"

namespace xrt::cli {

const char* version();

struct MetricSpec {
  std::string family = "euclidean";  // euclidean | hyperbolic_like | conformal_c11 | grid_sampled
  double rho = 0.5;
  double epsilon = 0.25;
  int axis = 0;
  std::string path;  // CSV for grid_sampled
};

struct FieldSpec {
  // zero | constant | random | potential | basis_potential | json
  std::string source = "random";
  int order = 1;
  int degree = 3;
  double value = 1.0;  // constant
  std::string path;    // json
};

struct DecomposeSpec {
  int degree = 4;
  std::vector<solver::BasisElement> basis;  // overrides degree when non-empty
  bool kernel_test = true;
  int trials = 20;
  int directions = 5;
  int transport_rays = 64;  // fan nodes sampled for the transport residual
  solver::SolverOptions solver{};
};

struct RunConfig {
  MetricSpec metric;
  FieldSpec field;
  verify::ToleranceConfig verify;  // grids, fan, step, tolerances, seed
  std::vector<std::string> checks{"all"};
  DecomposeSpec decompose;
  std::string output = "out";

  // ConfigError on invalid values; also resolves the check selection.
  void validate() const;
};

// ConfigError on unreadable files, TOML syntax errors, unknown keys and
// values of the wrong type. Relative data paths resolve against the file.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");

nlohmann::json to_json(const RunConfig& config);
// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& config);

metric::MetricField build_metric(const MetricSpec& spec);
tensor::SymmetricTensorField build_field(const RunConfig& config, const metric::MetricField& metric,
                                         std::mt19937_64& rng);
// Potentials for fields of the given order: explicit basis if configured,
// otherwise the full basis of the configured degree.
solver::PotentialBasis build_basis(const RunConfig& config, int field_order);

// Ground-truth coefficients for basis_potential fields: the field is σ∇ of
// build_basis(config, field.order).combine(coefficients). Draws from rng exactly as
// build_field does, so calling it on a fresh generator reproduces the field.
std::vector<double> basis_potential_coefficients(const RunConfig& config, std::mt19937_64& rng);

}  // namespace xrt::cli
