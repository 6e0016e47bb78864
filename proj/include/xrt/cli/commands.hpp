#pragma once

// Subcommands. Each writes its artifacts into config.output, embeds the
// config hash and version in every file, and returns a process exit code.

#include <functional>
#include <ostream>
#include <string>

#include "xrt/cli/config.hpp"

namespace xrt::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericalFailure = 3,
  kVerificationFailure = 4,
};

// sinogram.csv, sinogram.json, summary.txt; exit 3 when any ray failed.
int cmd_transform(const RunConfig& config, std::ostream& log);
// report.json, summary.txt; exit 4 on any unexpected verdict.
int cmd_verify(const RunConfig& config, std::ostream& log);
// decomposition.json, summary.txt; exit 4 when the kernel test fails on a
// nonpositively curved metric.
int cmd_decompose(const RunConfig& config, std::ostream& log);
// Rebuilds summary.txt from the JSON artifacts present in `dir`.
int cmd_report(const std::string& dir, std::ostream& log);

// Maps ConfigError/UsageError to 2 and NumericalError to 3, printing the
// message to `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace xrt::cli
