#pragma once

// Geodesic X-ray transform on the disk.
//
// Boundary directions are parametrized by the boundary angle φ and the fiber
// angle θ measured from the inward g-unit normal, so μ = cos θ. The inward
// boundary measure μ dΣ_∂ is discretized as (uniform φ) × (Gauss–Legendre θ
// on |θ| < acos μ_min) with weight w_θ cos θ |β'(φ)|_g Δφ.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "xrt/metric/geodesic.hpp"
#include "xrt/sphere/function.hpp"
#include "xrt/tensor/field.hpp"

namespace xrt::transform {

using metric::GeodesicOptions;
using metric::MetricField;
using metric::PhasePoint;

struct FanSpec {
  int n_boundary = 64;
  int n_theta = 32;
  double mu_min = 1e-3;
};

struct FanNode {
  double phi;
  double theta;
  double alpha;  // fiber angle of the inward direction
  PhasePoint z;
  double mu;
  double weight;  // μ dΣ_∂ quadrature weight
};

class BoundaryFan {
 public:
  BoundaryFan(const MetricField& metric, const FanSpec& spec = {});

  const FanSpec& spec() const { return spec_; }
  const std::string& metric_id() const { return metric_id_; }
  const std::vector<FanNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  // g-length of the boundary circle, Σ |β'(φ)|_g Δφ.
  double boundary_length() const { return boundary_length_; }

 private:
  FanSpec spec_;
  std::string metric_id_;
  std::vector<FanNode> nodes_;
  double boundary_length_ = 0.0;
};

// ⟨ν(x), v⟩_g at a boundary point; NotOnBoundary otherwise.
double mu_weight(const MetricField& metric, const PhasePoint& z);

// u^f(z) = ∫_0^τ λf(φ_t z) dt; 0 when τ(z) = 0.
double integral_function(const tensor::SymmetricTensorField& f, const MetricField& metric, const PhasePoint& z,
                         const GeodesicOptions& options = {});

// u^f as a function on SM (values only).
sm::SMFunction integral_function_sm(const tensor::SymmetricTensorField& f, const MetricField& metric,
                                    const GeodesicOptions& options = {});

struct XrayData {
  std::string metric_id;
  std::string field_id;
  double step = 0.0;
  std::vector<double> phi, alpha, value, tau;
  std::vector<bool> failed;  // NoExit or StepTooLarge at that node

  std::size_t size() const { return value.size(); }
  std::size_t failures() const;
  // max |If| over nodes that succeeded.
  double max_abs() const;
};

XrayData xray_transform(const tensor::SymmetricTensorField& f, const MetricField& metric, const BoundaryFan& fan,
                        const GeodesicOptions& options = {}, const std::string& field_id = "field");
// Several fields over one set of traced rays; field ids default to "field<i>".
std::vector<XrayData> xray_transform_batch(const std::vector<tensor::SymmetricTensorField>& fields,
                                           const MetricField& metric, const BoundaryFan& fan,
                                           const GeodesicOptions& options = {},
                                           const std::vector<std::string>& field_ids = {});
// (Σ w_i If_i²)^{1/2} over the fan nodes that succeeded: the L²(μ dΣ_∂) norm.
double xray_norm(const XrayData& data, const BoundaryFan& fan);

// Rows phi,alpha_in,value,tau after "# key=value" metadata lines; `extra`
// lines follow the built-in ones.
void write_csv(const XrayData& data, const std::string& path,
               const std::vector<std::pair<std::string, std::string>>& extra = {});
XrayData read_xray_csv(const std::string& path);

struct SantaloResult {
  double value = 0.0;
  // Estimate of the omitted grazing band |θ| > acos μ_min: sup|F| times the
  // band measure weighted by the travel time at the band edge.
  double cutoff_estimate = 0.0;
};

// ∫_{∂_in SM} ∫_0^τ F(φ_t z) dt μ dΣ_∂, which equals ∫_SM F dΣ.
SantaloResult santalo_integral(const sm::SMFunction& F, const MetricField& metric, const BoundaryFan& fan,
                               const GeodesicOptions& options = {});
// Same quadrature for several integrands over one set of traced rays.
std::vector<SantaloResult> santalo_integrals(const std::vector<sm::SMFunction>& F, const MetricField& metric,
                                             const BoundaryFan& fan, const GeodesicOptions& options = {});

}  // namespace xrt::transform
