#include "xrt/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "xrt/metric/diagnostics.hpp"

namespace xrt::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSinogramJson = "sinogram.json";
constexpr const char* kReportJson = "report.json";
constexpr const char* kDecompositionJson = "decomposition.json";
constexpr const char* kSummary = "summary.txt";

fs::path prepare(const RunConfig& config) {
  const fs::path dir(config.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

nlohmann::json stamp(const RunConfig& config) {
  return {{"version", version()}, {"config_hash", config_hash(config)}, {"config", to_json(config)}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string sci(double v, int digits = 3) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(digits) << v;
  return s.str();
}

std::string num(const nlohmann::json& v) { return v.is_number() ? sci(v.get<double>()) : "n/a"; }

std::string header(const nlohmann::json& j, const std::string& what) {
  return what + " (version " + j.value("version", "?") + ", config " + j.value("config_hash", "?") + ")\n";
}

std::string transform_summary(const nlohmann::json& j) {
  std::ostringstream out;
  out << header(j, "transform") << "  metric     " << j.at("metric").get<std::string>() << "\n"
      << "  field      " << j.at("field").get<std::string>() << " (order " << j.at("order") << ")\n"
      << "  nodes      " << j.at("nodes") << ", failed " << j.at("failures") << "\n"
      << "  max |If|   " << num(j.at("max_abs")) << "\n"
      << "  ||If||     " << num(j.at("l2_norm")) << "\n";
  return out.str();
}

std::string decomposition_summary(const nlohmann::json& j) {
  const auto& d = j.at("decomposition");
  const auto& diag = d.at("diagnostics");
  std::ostringstream out;
  out << header(j, "decompose") << "  metric            " << j.at("metric").get<std::string>() << "\n"
      << "  basis             " << j.at("basis").at("size") << " elements, rank " << diag.at("rank") << ", "
      << diag.at("method").get<std::string>() << ", condition " << num(diag.at("condition")) << "\n"
      << "  ||f||             " << num(d.at("field_norm")) << "\n"
      << "  ||f_s||           " << num(d.at("solenoidal_norm")) << "\n"
      << "  ||If_s - If||     " << num(d.at("transform_discrepancy")) << "\n"
      << "  orthogonality     " << num(diag.at("orthogonality")) << "\n"
      << "  transport (p)     " << num(j.at("transport_residual").at("potential_part")) << "\n";
  if (j.contains("truth")) out << "  coefficient error " << num(j.at("truth").at("coefficient_error")) << "\n";
  if (j.contains("kernel_test")) {
    const auto& k = j.at("kernel_test");
    out << "  kernel test       " << k.at("verdict").get<std::string>() << ": slope " << num(k.at("slope"))
        << ", intercept " << num(k.at("intercept")) << ", max gauge " << num(k.at("max_gauge"))
        << ", lower bound " << num(k.at("lower_bound")) << "\n";
  }
  return out.str();
}

std::string verify_summary(const nlohmann::json& j) {
  return header(j, "verify") + verify::report_from_json(j.at("report")).table();
}

bool positive_curvature_on(const metric::MetricField& metric, const tensor::DiskQuadrature& q) {
  const tensor::DiskNodes nodes = tensor::disk_nodes(q);
  for (std::size_t i = 0; i < nodes.w.size(); ++i)
    if (metric::gauss_curvature(metric, {nodes.x1[i], nodes.x2[i]}).value > 0.0) return true;
  return false;
}

}  // namespace

int cmd_transform(const RunConfig& config, std::ostream& log) {
  config.validate();
  const fs::path dir = prepare(config);
  const metric::MetricField metric = build_metric(config.metric);
  std::mt19937_64 rng(config.verify.seed);
  const tensor::SymmetricTensorField f = build_field(config, metric, rng);
  const transform::BoundaryFan fan(metric, config.verify.fan);
  const transform::XrayData data = transform::xray_transform(f, metric, fan, config.verify.geodesic, config.field.source);

  const std::string hash = config_hash(config);
  transform::write_csv(data, (dir / "sinogram.csv").string(), {{"config_hash", hash}, {"version", version()}});
  nlohmann::json j = stamp(config);
  j["metric"] = metric.id();
  j["field"] = config.field.source;
  j["order"] = f.order();
  j["step"] = data.step;
  j["nodes"] = data.size();
  j["failures"] = data.failures();
  j["max_abs"] = data.max_abs();
  j["l2_norm"] = transform::xray_norm(data, fan);
  write_json(dir / kSinogramJson, j);
  const std::string summary = transform_summary(j);
  write_text(dir / kSummary, summary);
  log << summary;
  if (data.failures() > 0) {
    log << data.failures() << " rays failed; flagged as nan in sinogram.csv\n";
    return kNumericalFailure;
  }
  return kOk;
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
  config.validate();
  const fs::path dir = prepare(config);
  const metric::MetricField metric = build_metric(config.metric);
  verify::VerificationReport report = verify::run_suite(metric, config.checks, config.verify);
  nlohmann::json j = stamp(config);
  j["report"] = report.to_json();
  write_json(dir / kReportJson, j);
  const std::string summary = verify_summary(j);
  write_text(dir / kSummary, summary);
  log << summary;
  return report.all_as_expected() ? kOk : kVerificationFailure;
}

int cmd_decompose(const RunConfig& config, std::ostream& log) {
  config.validate();
  const fs::path dir = prepare(config);
  const metric::MetricField metric = build_metric(config.metric);
  std::mt19937_64 rng(config.verify.seed);
  const tensor::SymmetricTensorField f = build_field(config, metric, rng);
  const solver::PotentialBasis basis = build_basis(config, f.order());
  const solver::SolverOptions& opts = config.decompose.solver;

  solver::DecompositionResult result = solver::solve_potential(f, metric, basis, opts);
  const transform::BoundaryFan fan(metric, config.verify.fan);
  solver::attach_transform_discrepancy(result, f, metric, fan, config.verify.geodesic);

  std::vector<metric::PhasePoint> starts;
  const std::size_t stride = std::max<std::size_t>(1, fan.size() / config.decompose.transport_rays);
  for (std::size_t i = 0; i < fan.size() && starts.size() < static_cast<std::size_t>(config.decompose.transport_rays);
       i += stride)
    starts.push_back(fan.nodes()[i].z);

  nlohmann::json j = stamp(config);
  j["metric"] = metric.id();
  j["basis"] = {{"order", basis.order()}, {"size", basis.size()}, {"explicit", !config.decompose.basis.empty()}};
  j["decomposition"] = solver::to_json(result);
  j["transport_residual"] = {
      {"rays", starts.size()},
      {"potential_part",
       solver::transport_residual(result.potential, f - result.solenoidal, metric, starts, config.verify.geodesic)},
      {"field", solver::transport_residual(result.potential, f, metric, starts, config.verify.geodesic)}};
  if (config.field.source == "basis_potential") {
    std::mt19937_64 truth_rng(config.verify.seed);
    const auto truth = basis_potential_coefficients(config, truth_rng);
    double err = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) err = std::max(err, std::abs(result.coefficients[i] - truth[i]));
    j["truth"] = {{"coefficient_error", err}};
  }

  int code = kOk;
  if (config.decompose.kernel_test) {
    std::seed_seq seq{config.verify.seed, std::uint64_t{1}};
    std::mt19937_64 krng(seq);
    solver::KernelTestOptions k;
    k.trials = config.decompose.trials;
    k.directions = config.decompose.directions;
    k.solver = opts;
    k.geodesic = config.verify.geodesic;
    const solver::KernelTestResult kt = solver::kernel_test(metric, fan, basis, krng, k);
    nlohmann::json kj = solver::to_json(kt);
    // Positive curvature lies outside the hypothesis: results only.
    const bool applicable = !positive_curvature_on(metric, opts.quadrature);
    kj["verdict"] = !applicable ? "reported" : kt.passed() ? "pass" : "fail";
    if (applicable && !kt.passed()) code = kVerificationFailure;
    j["kernel_test"] = kj;
  }
  write_json(dir / kDecompositionJson, j);
  const std::string summary = decomposition_summary(j);
  write_text(dir / kSummary, summary);
  log << summary;
  return code;
}

int cmd_report(const std::string& dir, std::ostream& log) {
  const fs::path d(dir);
  std::string summary;
  if (fs::exists(d / kSinogramJson)) summary += transform_summary(read_json(d / kSinogramJson));
  if (fs::exists(d / kReportJson)) summary += verify_summary(read_json(d / kReportJson));
  if (fs::exists(d / kDecompositionJson)) summary += decomposition_summary(read_json(d / kDecompositionJson));
  if (summary.empty()) throw ConfigError("no artifacts to report in " + dir);
  write_text(d / kSummary, summary);
  log << summary;
  return kOk;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace xrt::cli
