#pragma once

// Quadrature grid on SM: Gauss–Legendre radii × uniform polar angles on the
// disk, uniform fiber angles α_k = 2πk/N_α. The volume element is
// dΣ = √det g dx dα.

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "xrt/sphere/function.hpp"

namespace xrt::sm {

struct SMGridSpec {
  int n_radial = 16;
  int n_angular = 32;
  int n_alpha = 32;
};

class SMGrid {
 public:
  SMGrid(const MetricField& metric, const SMGridSpec& spec);

  const SMGridSpec& spec() const { return spec_; }
  const std::string& metric_id() const { return metric_id_; }
  int n_nodes() const { return static_cast<int>(x1_.size()); }
  int n_alpha() const { return spec_.n_alpha; }
  std::size_t size() const { return x1_.size() * static_cast<std::size_t>(spec_.n_alpha); }

  double x1(int node) const { return x1_[node]; }
  double x2(int node) const { return x2_[node]; }
  // Spatial weight including √det g; the fiber weight is 2π/N_α.
  double area_weight(int node) const { return w_[node]; }
  double alpha(int k) const;
  double alpha_weight() const;

  bool compatible(const SMGrid& o) const;

 private:
  SMGridSpec spec_;
  std::string metric_id_;
  std::vector<double> x1_, x2_, w_;
};

// Values on an SMGrid, node-major with N_α consecutive fiber samples.
struct SMSamples {
  std::shared_ptr<const SMGrid> grid;
  std::vector<double> values;

  double at(int node, int k) const { return values[static_cast<std::size_t>(node) * grid->n_alpha() + k]; }
  double& at(int node, int k) { return values[static_cast<std::size_t>(node) * grid->n_alpha() + k]; }
  std::span<const double> fiber(int node) const {
    return {values.data() + static_cast<std::size_t>(node) * grid->n_alpha(), static_cast<std::size_t>(grid->n_alpha())};
  }
  std::span<double> fiber(int node) {
    return {values.data() + static_cast<std::size_t>(node) * grid->n_alpha(), static_cast<std::size_t>(grid->n_alpha())};
  }
};

SMSamples sample(const SMFunction& u, std::shared_ptr<const SMGrid> grid);
SMSamples zeros_like(const SMSamples& s);
SMSamples combine(double a, const SMSamples& u, double b, const SMSamples& w);

// ∫_SM u w dΣ
double sm_inner(const SMSamples& u, const SMSamples& w);
double sm_norm(const SMSamples& u);
// ∫_SM g(W, Z) dΣ = ∫ W⊥ Z⊥ dΣ
double n_inner(const SMSamples& w_perp, const SMSamples& z_perp);
// ∫_SM c(x) u w dΣ with a spatial weight c sampled per node.
double sm_weighted_inner(const std::vector<double>& node_weight, const SMSamples& u, const SMSamples& w);

// Spectral ∂_α and Δv = −∂_α² per fiber; exact for fibers of trigonometric
// degree below N_α/2.
SMSamples vertical(const SMSamples& u);
SMSamples vertical_laplacian(const SMSamples& u);

// Per node, coefficients û_k for k = 0..N_α/2.
struct FiberSpectrum {
  std::shared_ptr<const SMGrid> grid;
  std::vector<std::vector<std::complex<double>>> coeffs;

  // û_k for any k in (−N_α/2, N_α/2], using û_{−k} = conj(û_k).
  std::complex<double> coefficient(int node, int k) const;
};

FiberSpectrum fiber_fourier(const SMSamples& u);
SMSamples inverse_fourier(const FiberSpectrum& s);
SMSamples degree_part(const SMSamples& u, int k);
// ‖u − u_k‖ / ‖u‖ over the grid (0 for u = 0).
double degree_leakage(const SMSamples& u, int k);

struct XPlusMinus {
  SMSamples plus;   // degree k + 1
  SMSamples minus;  // degree k − 1; zero for k = 0
};

// Splits X u_k for a pure degree-k function; NotPureDegree when the
// sampled leakage of u_k exceeds tol.
XPlusMinus x_plus_minus(const SMFunction& uk, int k, const MetricField& metric, std::shared_ptr<const SMGrid> grid,
                        Derivatives mode = Derivatives::automatic, double tol = 1e-8);

// Rows x1,x2,alpha,value.
void write_csv(const SMSamples& u, const std::string& path);

}  // namespace xrt::sm
