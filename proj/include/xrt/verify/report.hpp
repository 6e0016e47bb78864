#pragma once

// Check entries and their aggregation. An entry passes iff residual ≤ tol
// (a NaN residual fails); negative controls carry expected = fail and count
// as healthy when they do fail.

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace xrt::verify {

enum class Expectation { pass, fail };

struct CheckEntry {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tol = 0.0;
  Expectation expected = Expectation::pass;
  std::string note;

  bool passed() const { return residual <= tol; }
  bool as_expected() const { return passed() == (expected == Expectation::pass); }
};

// residual = diff / scale, 0 when diff = 0; scale = 0 with diff ≠ 0 fails.
CheckEntry identity_entry(std::string name, double lhs, double rhs, double diff, double scale, double tol);
// lhs ≤ rhs: residual = max(0, lhs − rhs) / scale.
CheckEntry inequality_entry(std::string name, double lhs, double rhs, double scale, double tol);

struct VerificationReport {
  std::vector<CheckEntry> entries;
  std::map<std::string, std::string> environment;

  void add(CheckEntry e) { entries.push_back(std::move(e)); }
  void add(const std::vector<CheckEntry>& es) { entries.insert(entries.end(), es.begin(), es.end()); }
  void append(const VerificationReport& other);

  std::size_t unexpected() const;
  bool all_as_expected() const { return unexpected() == 0; }

  // {"environment": {...}, "checks": [{name, lhs, rhs, residual, tol,
  // verdict, expected, note}]}
  nlohmann::json to_json() const;
  std::string table() const;
};

void write_json(const VerificationReport& report, const std::string& path);
// Inverse of to_json; null residuals read back as +inf.
VerificationReport report_from_json(const nlohmann::json& j);

}  // namespace xrt::verify
