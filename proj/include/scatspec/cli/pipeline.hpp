#pragma once
//! Stage orchestration for the command-line tool.

#include "scatspec/cli/config.hpp"
#include "scatspec/error.hpp"

#include <map>
#include <string>
#include <vector>

namespace scatspec {

struct RunRequest {
  std::string command;        ///< scatter, marchenko, kernel, apply, hnorm, verify, report
  std::string check;          ///< verify only: wl2, decay, weak11, cz, besov, tails
  std::vector<double> s_values;  ///< verify wl2 --s
};

struct RunOutcome {
  int status = 0;             ///< 0 all verdicts pass, 1 some verdict fails
  std::vector<std::string> files;  ///< written, relative to the output directory
  std::map<std::string, double> stage_seconds;
  std::map<std::string, bool> cache_hits;
};

//! Runs the request and writes manifest.json into cfg.output_dir. Outputs are a
//! function of the config and the request only.
RunOutcome run(const ExperimentConfig& cfg, const RunRequest& req);

std::string error_json(ErrorCode code, const std::string& message);

extern const char* const kScatspecVersion;

} // namespace scatspec
