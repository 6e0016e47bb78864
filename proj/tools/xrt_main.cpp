#include <iostream>

#include <CLI11.hpp>

#include "xrt/cli/commands.hpp"

using namespace xrt::cli;

int main(int argc, char** argv) {
  CLI::App app{"Geodesic X-ray transform toolkit"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> checks;
  std::uint64_t seed = 0;
  double step = 0.0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "TOML run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for every random input");
    sub->add_option("--step", step, "geodesic integrator step")->check(CLI::PositiveNumber);
  };
  CLI::App* transform = app.add_subcommand("transform", "sample If on the inward boundary fan");
  CLI::App* verify = app.add_subcommand("verify", "run identity and inequality checks");
  CLI::App* decompose = app.add_subcommand("decompose", "solenoidal decomposition and kernel test");
  CLI::App* report = app.add_subcommand("report", "summarize the artifacts in an output directory");
  for (CLI::App* sub : {transform, verify, decompose}) common(sub);
  verify->add_option("--check", checks, "check name or 'all' (repeatable)");
  report->add_option("--out", out_dir, "directory holding the artifacts")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  return guarded(
      [&] {
        if (sub == report) return cmd_report(out_dir, std::cout);
        RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (sub->count("--out")) config.output = out_dir;
        if (sub->count("--seed")) config.verify.seed = seed;
        if (sub->count("--step")) config.verify.geodesic.step = step;
        if (sub == verify && !checks.empty()) config.checks = checks;
        if (sub == transform) return cmd_transform(config, std::cout);
        if (sub == verify) return cmd_verify(config, std::cout);
        return cmd_decompose(config, std::cout);
      },
      std::cerr);
}
