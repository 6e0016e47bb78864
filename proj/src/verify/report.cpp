#include "xrt/verify/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "xrt/core/errors.hpp"

namespace xrt::verify {

namespace {

const char* verdict_name(bool pass) { return pass ? "pass" : "fail"; }

}  // namespace

CheckEntry identity_entry(std::string name, double lhs, double rhs, double diff, double scale, double tol) {
  CheckEntry e;
  e.name = std::move(name);
  e.lhs = lhs;
  e.rhs = rhs;
  e.tol = tol;
  if (diff == 0.0) e.residual = 0.0;
  else if (scale > 0.0) e.residual = diff / scale;
  else e.residual = INFINITY;
  return e;
}

CheckEntry inequality_entry(std::string name, double lhs, double rhs, double scale, double tol) {
  return identity_entry(std::move(name), lhs, rhs, std::max(0.0, lhs - rhs), scale, tol);
}

void VerificationReport::append(const VerificationReport& other) {
  add(other.entries);
  for (const auto& [k, v] : other.environment) environment.emplace(k, v);
}

std::size_t VerificationReport::unexpected() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(),
                                                [](const CheckEntry& e) { return !e.as_expected(); }));
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json j;
    j["name"] = e.name;
    j["lhs"] = e.lhs;
    j["rhs"] = e.rhs;
    // Non-finite residuals serialize as null.
    if (std::isfinite(e.residual)) j["residual"] = e.residual;
    else j["residual"] = nullptr;
    j["tol"] = e.tol;
    j["verdict"] = verdict_name(e.passed());
    j["expected"] = verdict_name(e.expected == Expectation::pass);
    if (!e.note.empty()) j["note"] = e.note;
    checks.push_back(std::move(j));
  }
  nlohmann::json env = nlohmann::json::object();
  for (const auto& [k, v] : environment) env[k] = v;
  return {{"environment", env}, {"checks", checks}, {"unexpected", unexpected()}};
}

std::string VerificationReport::table() const {
  std::size_t width = 5;
  for (const auto& e : entries) width = std::max(width, e.name.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "check" << "  " << std::right << std::setw(12) << "lhs"
      << std::setw(12) << "rhs" << std::setw(11) << "residual" << std::setw(9) << "tol" << "  verdict\n";
  out << std::string(width + 53, '-') << "\n";
  for (const auto& e : entries) {
    out << std::left << std::setw(static_cast<int>(width)) << e.name << "  " << std::right << std::setprecision(4)
        << std::scientific << std::setw(12) << e.lhs << std::setw(12) << e.rhs << std::setprecision(2)
        << std::setw(11) << e.residual << std::setprecision(0) << std::setw(9) << e.tol << "  "
        << verdict_name(e.passed());
    if (e.expected == Expectation::fail) out << (e.passed() ? " (control should fail)" : " (expected)");
    out << "\n";
  }
  out << entries.size() << " checks, " << unexpected() << " unexpected\n";
  return out.str();
}

void write_json(const VerificationReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << report.to_json().dump(2) << "\n";
}

VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport r;
  try {
    for (const auto& [k, v] : j.at("environment").items()) r.environment[k] = v.get<std::string>();
    for (const auto& c : j.at("checks")) {
      CheckEntry e;
      e.name = c.at("name").get<std::string>();
      e.lhs = c.at("lhs").get<double>();
      e.rhs = c.at("rhs").get<double>();
      e.residual = c.at("residual").is_null() ? INFINITY : c.at("residual").get<double>();
      e.tol = c.at("tol").get<double>();
      e.expected = c.at("expected").get<std::string>() == verdict_name(true) ? Expectation::pass : Expectation::fail;
      if (c.contains("note")) e.note = c.at("note").get<std::string>();
      r.add(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed verification report: ") + e.what());
  }
  return r;
}

}  // namespace xrt::verify
