#include "xrt/cli/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <tomlplusplus/toml.hpp>

namespace xrt::cli {

#ifndef XRT_VERSION
#define XRT_VERSION "0.0.0"
#endif

const char* version() { return XRT_VERSION; }

namespace {

using Setter = std::function<void(RunConfig&, const toml::node&, const std::string& key)>;

template <class T>
T as(const toml::node& n, const std::string& key) {
  if constexpr (std::is_same_v<T, bool>) {
    if (auto v = n.value_exact<bool>()) return *v;
  } else if constexpr (std::is_integral_v<T>) {
    if (auto v = n.value_exact<std::int64_t>()) return static_cast<T>(*v);
  } else if constexpr (std::is_floating_point_v<T>) {
    if (auto v = n.value<double>()) return *v;
  } else {
    if (auto v = n.value_exact<std::string>()) return *v;
  }
  throw ConfigError("config key '" + key + "' has the wrong type");
}

std::vector<std::string> string_list(const toml::node& n, const std::string& key) {
  const toml::array* arr = n.as_array();
  if (!arr) throw ConfigError("config key '" + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const toml::node& e : *arr) out.push_back(as<std::string>(e, key));
  return out;
}

std::vector<solver::BasisElement> basis_list(const toml::node& n, const std::string& key) {
  const toml::array* arr = n.as_array();
  if (!arr) throw ConfigError("config key '" + key + "' must be an array of [component, p1, p2]");
  std::vector<solver::BasisElement> out;
  for (const toml::node& e : *arr) {
    const toml::array* t = e.as_array();
    if (!t || t->size() != 3) throw ConfigError("basis entries are [component, p1, p2]");
    out.push_back({as<int>(*t->get(0), key), as<int>(*t->get(1), key), as<int>(*t->get(2), key)});
  }
  return out;
}

// Setters by table and key; the empty name is the top level.
const std::map<std::string, std::map<std::string, Setter>>& schema() {
  using C = RunConfig;
  static const std::map<std::string, std::map<std::string, Setter>> s{
      {"",
       {{"seed", [](C& c, const toml::node& n, const std::string& k) {
           const auto v = as<std::int64_t>(n, k);
           if (v < 0) throw ConfigError("seed must be nonnegative");
           c.verify.seed = static_cast<std::uint64_t>(v);
         }},
        {"output", [](C& c, const toml::node& n, const std::string& k) { c.output = as<std::string>(n, k); }},
        {"checks", [](C& c, const toml::node& n, const std::string& k) { c.checks = string_list(n, k); }}}},
      {"metric",
       {{"family", [](C& c, const toml::node& n, const std::string& k) { c.metric.family = as<std::string>(n, k); }},
        {"rho", [](C& c, const toml::node& n, const std::string& k) { c.metric.rho = as<double>(n, k); }},
        {"epsilon", [](C& c, const toml::node& n, const std::string& k) { c.metric.epsilon = as<double>(n, k); }},
        {"axis", [](C& c, const toml::node& n, const std::string& k) { c.metric.axis = as<int>(n, k); }},
        {"path", [](C& c, const toml::node& n, const std::string& k) { c.metric.path = as<std::string>(n, k); }}}},
      {"field",
       {{"source", [](C& c, const toml::node& n, const std::string& k) { c.field.source = as<std::string>(n, k); }},
        {"order", [](C& c, const toml::node& n, const std::string& k) { c.field.order = as<int>(n, k); }},
        {"degree", [](C& c, const toml::node& n, const std::string& k) { c.field.degree = as<int>(n, k); }},
        {"value", [](C& c, const toml::node& n, const std::string& k) { c.field.value = as<double>(n, k); }},
        {"path", [](C& c, const toml::node& n, const std::string& k) { c.field.path = as<std::string>(n, k); }}}},
      {"grid",
       {{"n_r", [](C& c, const toml::node& n, const std::string& k) { c.verify.grid.n_radial = as<int>(n, k); }},
        {"n_phi", [](C& c, const toml::node& n, const std::string& k) { c.verify.grid.n_angular = as<int>(n, k); }},
        {"n_alpha", [](C& c, const toml::node& n, const std::string& k) { c.verify.grid.n_alpha = as<int>(n, k); }},
        {"n_b", [](C& c, const toml::node& n, const std::string& k) { c.verify.fan.n_boundary = as<int>(n, k); }},
        {"n_theta", [](C& c, const toml::node& n, const std::string& k) { c.verify.fan.n_theta = as<int>(n, k); }},
        {"mu_min", [](C& c, const toml::node& n, const std::string& k) { c.verify.fan.mu_min = as<double>(n, k); }},
        {"step", [](C& c, const toml::node& n, const std::string& k) { c.verify.geodesic.step = as<double>(n, k); }},
        {"chain_n_r",
         [](C& c, const toml::node& n, const std::string& k) { c.verify.chain_grid.n_radial = as<int>(n, k); }},
        {"chain_n_phi",
         [](C& c, const toml::node& n, const std::string& k) { c.verify.chain_grid.n_angular = as<int>(n, k); }},
        {"chain_n_alpha",
         [](C& c, const toml::node& n, const std::string& k) { c.verify.chain_grid.n_alpha = as<int>(n, k); }},
        {"chain_step", [](C& c, const toml::node& n, const std::string& k) { c.verify.chain_step = as<double>(n, k); }}}},
      {"verify",
       {{"samples", [](C& c, const toml::node& n, const std::string& k) { c.verify.samples = as<int>(n, k); }},
        {"bound_samples",
         [](C& c, const toml::node& n, const std::string& k) { c.verify.bound_samples = as<int>(n, k); }},
        {"norm_fields", [](C& c, const toml::node& n, const std::string& k) { c.verify.norm_fields = as<int>(n, k); }},
        {"chain_order", [](C& c, const toml::node& n, const std::string& k) { c.verify.chain_order = as<int>(n, k); }}}},
      {"tolerances", {}},
      {"decompose",
       {{"degree", [](C& c, const toml::node& n, const std::string& k) { c.decompose.degree = as<int>(n, k); }},
        {"basis", [](C& c, const toml::node& n, const std::string& k) { c.decompose.basis = basis_list(n, k); }},
        {"kernel_test",
         [](C& c, const toml::node& n, const std::string& k) { c.decompose.kernel_test = as<bool>(n, k); }},
        {"trials", [](C& c, const toml::node& n, const std::string& k) { c.decompose.trials = as<int>(n, k); }},
        {"directions", [](C& c, const toml::node& n, const std::string& k) { c.decompose.directions = as<int>(n, k); }},
        {"transport_rays",
         [](C& c, const toml::node& n, const std::string& k) { c.decompose.transport_rays = as<int>(n, k); }},
        {"dense_limit",
         [](C& c, const toml::node& n, const std::string& k) { c.decompose.solver.dense_limit = as<int>(n, k); }},
        {"cg_tolerance",
         [](C& c, const toml::node& n, const std::string& k) { c.decompose.solver.cg_tolerance = as<double>(n, k); }},
        {"max_iterations",
         [](C& c, const toml::node& n, const std::string& k) { c.decompose.solver.max_iterations = as<int>(n, k); }},
        {"quadrature_radial",
         [](C& c, const toml::node& n, const std::string& k) {
           c.decompose.solver.quadrature.n_radial = as<int>(n, k);
         }},
        {"quadrature_angular", [](C& c, const toml::node& n, const std::string& k) {
           c.decompose.solver.quadrature.n_angular = as<int>(n, k);
         }}}}};
  return s;
}

// Tolerance names map onto ToleranceConfig members.
const std::map<std::string, double verify::ToleranceConfig::*>& tolerance_members() {
  using T = verify::ToleranceConfig;
  static const std::map<std::string, double T::*> m{
      {"commutator_ad", &T::commutator_ad},   {"commutator_fd", &T::commutator_fd},
      {"degree_ad", &T::degree_ad},           {"degree_fd", &T::degree_fd},
      {"pestov", &T::pestov},                 {"pestov_inequality", &T::pestov_inequality},
      {"chain_equality", &T::chain_equality}, {"chain_inequality", &T::chain_inequality},
      {"parity", &T::parity},                 {"friedrichs", &T::friedrichs},
      {"index_form", &T::index_form},         {"liouville", &T::liouville},
      {"norm_identity", &T::norm_identity},   {"constant_bound", &T::constant_bound},
      {"santalo", &T::santalo},               {"xpm_bound", &T::xpm_bound}};
  return m;
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base_dir) / path).lexically_normal().string();
}

}  // namespace

void RunConfig::validate() const {
  verify.validate();
  verify::resolve_selection(checks);
  static const std::set<std::string> families{"euclidean", "hyperbolic_like", "conformal_c11", "grid_sampled"};
  if (!families.contains(metric.family)) throw ConfigError("unknown metric family '" + metric.family + "'");
  if (metric.family == "grid_sampled" && metric.path.empty()) throw ConfigError("grid_sampled metric needs a path");
  if (metric.axis != 0 && metric.axis != 1) throw ConfigError("conformal_c11 axis must be 0 or 1");
  static const std::set<std::string> sources{"zero", "constant", "random", "potential", "basis_potential", "json"};
  if (!sources.contains(field.source)) throw ConfigError("unknown field source '" + field.source + "'");
  if (field.source == "json" && field.path.empty()) throw ConfigError("json field source needs a path");
  if (field.source != "json") tensor::SymmetricTensorField::check_order(field.order);
  if ((field.source == "potential" || field.source == "basis_potential") && field.order < 1)
    throw ConfigError("potential fields have order at least 1");
  if (field.degree < 0) throw ConfigError("field degree must be nonnegative");
  if (decompose.degree < 0) throw ConfigError("basis degree must be nonnegative");
  if (decompose.trials < 2 || decompose.directions < 1 || decompose.transport_rays < 1)
    throw ConfigError("decompose trials >= 2, directions >= 1 and transport_rays >= 1 are required");
  if (decompose.solver.dense_limit < 1 || decompose.solver.max_iterations < 1 || !(decompose.solver.cg_tolerance > 0.0))
    throw ConfigError("solver limits must be positive");
  if (decompose.solver.quadrature.n_radial < 1 || decompose.solver.quadrature.n_angular < 1)
    throw ConfigError("solver quadrature sizes must be positive");
  if (output.empty()) throw ConfigError("output directory must be named");
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }
  RunConfig c;
  const auto& s = schema();
  auto apply = [&](const std::string& table, const toml::table& t) {
    const auto& keys = s.at(table);
    for (const auto& [k, node] : t) {
      const std::string key(k.str());
      const std::string full = table.empty() ? key : table + "." + key;
      if (table == "tolerances") {
        auto it = tolerance_members().find(key);
        if (it == tolerance_members().end()) throw ConfigError("unknown tolerance '" + key + "'");
        c.verify.*(it->second) = as<double>(node, full);
        continue;
      }
      auto it = keys.find(key);
      if (it == keys.end()) throw ConfigError("unknown config key '" + full + "'");
      it->second(c, node, full);
    }
  };
  toml::table top;
  for (const auto& [k, node] : root) {
    const std::string key(k.str());
    if (const toml::table* t = node.as_table()) {
      if (!s.contains(key) || key.empty()) throw ConfigError("unknown config table [" + key + "]");
      apply(key, *t);
    } else {
      top.insert(k, node);
    }
  }
  apply("", top);
  c.metric.path = resolve(c.metric.path, base_dir);
  c.field.path = resolve(c.field.path, base_dir);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::filesystem::path(path).parent_path().string());
}

nlohmann::json to_json(const RunConfig& c) {
  const verify::ToleranceConfig& v = c.verify;
  nlohmann::json tol;
  for (const auto& [name, member] : tolerance_members()) tol[name] = v.*member;
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& e : c.decompose.basis) basis.push_back({e.component, e.p1, e.p2});
  return {{"seed", v.seed},
          {"output", c.output},
          {"checks", c.checks},
          {"metric",
           {{"family", c.metric.family},
            {"rho", c.metric.rho},
            {"epsilon", c.metric.epsilon},
            {"axis", c.metric.axis},
            {"path", c.metric.path}}},
          {"field",
           {{"source", c.field.source},
            {"order", c.field.order},
            {"degree", c.field.degree},
            {"value", c.field.value},
            {"path", c.field.path}}},
          {"grid",
           {{"n_r", v.grid.n_radial},
            {"n_phi", v.grid.n_angular},
            {"n_alpha", v.grid.n_alpha},
            {"n_b", v.fan.n_boundary},
            {"n_theta", v.fan.n_theta},
            {"mu_min", v.fan.mu_min},
            {"step", v.geodesic.step},
            {"chain_n_r", v.chain_grid.n_radial},
            {"chain_n_phi", v.chain_grid.n_angular},
            {"chain_n_alpha", v.chain_grid.n_alpha},
            {"chain_step", v.chain_step}}},
          {"verify",
           {{"samples", v.samples},
            {"bound_samples", v.bound_samples},
            {"norm_fields", v.norm_fields},
            {"chain_order", v.chain_order}}},
          {"tolerances", tol},
          {"decompose",
           {{"degree", c.decompose.degree},
            {"basis", basis},
            {"kernel_test", c.decompose.kernel_test},
            {"trials", c.decompose.trials},
            {"directions", c.decompose.directions},
            {"transport_rays", c.decompose.transport_rays},
            {"dense_limit", c.decompose.solver.dense_limit},
            {"cg_tolerance", c.decompose.solver.cg_tolerance},
            {"max_iterations", c.decompose.solver.max_iterations},
            {"quadrature_radial", c.decompose.solver.quadrature.n_radial},
            {"quadrature_angular", c.decompose.solver.quadrature.n_angular}}}};
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : to_json(config).dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

metric::MetricField build_metric(const MetricSpec& spec) {
  if (spec.family == "euclidean") return metric::MetricField::euclidean();
  if (spec.family == "hyperbolic_like") return metric::MetricField::hyperbolic_like(spec.rho);
  if (spec.family == "conformal_c11") return metric::MetricField::conformal_c11(spec.epsilon, spec.axis);
  if (spec.family == "grid_sampled") return metric::MetricField::from_csv(spec.path);
  throw ConfigError("unknown metric family '" + spec.family + "'");
}

solver::PotentialBasis build_basis(const RunConfig& config, int field_order) {
  if (field_order < 1) throw ConfigError("potentials exist only for fields of order at least 1");
  const int order = field_order - 1;
  if (!config.decompose.basis.empty()) return solver::PotentialBasis(order, config.decompose.basis);
  return solver::PotentialBasis(order, config.decompose.degree);
}

std::vector<double> basis_potential_coefficients(const RunConfig& config, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> c(static_cast<std::size_t>(build_basis(config, config.field.order).size()));
  for (double& v : c) v = normal(rng);
  return c;
}

tensor::SymmetricTensorField build_field(const RunConfig& config, const metric::MetricField& metric,
                                         std::mt19937_64& rng) {
  const FieldSpec& s = config.field;
  using tensor::SymmetricTensorField;
  if (s.source == "zero") return SymmetricTensorField::zero(s.order);
  if (s.source == "constant")
    return SymmetricTensorField::polynomial(
        s.order, std::vector<tensor::Polynomial>(static_cast<std::size_t>(s.order) + 1,
                                                 tensor::Polynomial::constant(s.value)));
  if (s.source == "random") return tensor::random_polynomial_field(s.order, s.degree, rng);
  if (s.source == "potential")
    return tensor::sym_cov_derivative(tensor::random_potential(s.order - 1, s.degree, rng), metric);
  if (s.source == "basis_potential") {
    const auto c = basis_potential_coefficients(config, rng);
    return tensor::sym_cov_derivative(build_basis(config, s.order).combine(c), metric);
  }
  if (s.source == "json") return tensor::read_field_json(s.path);
  throw ConfigError("unknown field source '" + s.source + "'");
}

}  // namespace xrt::cli
