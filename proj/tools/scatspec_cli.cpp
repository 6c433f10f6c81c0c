//! scatspec command-line driver.

#include "scatspec/cli/config.hpp"
#include "scatspec/cli/pipeline.hpp"
#include "scatspec/error.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace scatspec;
  CLI::App app{"scatspec: spectral multipliers for 1D Schroedinger operators"};
  app.set_version_flag("--version", kScatspecVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string cache_dir;
  unsigned jobs = 0;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "experiment config (INI)")->required();
  auto* cache_opt = app.add_option("--cache", cache_dir, "kernel cache directory");
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads (0 = auto)");
  auto* seed_opt = app.add_option("--seed", seed, "seed for random test functions");

  RunRequest req;
  for (const char* name : {"scatter", "marchenko", "kernel", "apply", "hnorm", "report"})
    app.add_subcommand(name)->callback([&req, name] { req.command = name; });

  auto* verify = app.add_subcommand("verify", "estimate checks");
  verify->require_subcommand(1);
  for (const char* name : {"wl2", "decay", "weak11", "cz", "besov", "tails"}) {
    auto* sub = verify->add_subcommand(name);
    if (std::string(name) == "wl2") sub->add_option("--s", req.s_values, "Sobolev order(s)");
    sub->callback([&req, name] {
      req.command = "verify";
      req.check = name;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (*cache_opt) cfg.cache_dir = cache_dir;
    if (*jobs_opt) cfg.jobs = jobs;
    if (*seed_opt) cfg.seed = seed;
    validate(cfg);
    const RunOutcome out = run(cfg, req);
    for (const auto& f : out.files) std::cout << f << "\n";
    return out.status;
  } catch (const Error& e) {
    std::cout << error_json(e.code(), e.what()) << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cout << error_json(ErrorCode::io_error, e.what()) << std::endl;
    return 3;
  }
}
