#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "projsplit/problems.hpp"

namespace projsplit {

struct RunConfig {
  ProblemInstance problem;
  StepConfig solver;
  StoppingRule stopping;
  std::string trace_path;
  std::string summary_path;
  long seed = 0;
};

/// Parse and fully validate a configuration object. Throws ConfigError
/// naming the offending field and the violated inequality.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

struct RunOutcome {
  int exit_code = 0;            // 0 converged, 2 max-iters, 3 typed failure
  std::string failure_message;  // set when exit_code == 3
};

/// Execute the run, write the trace CSV and summary JSON.
RunOutcome run_command(const RunConfig& cfg);

/// Check a supplied product-space point ({"z": [...], "w": [[...], ...]})
/// against the config's problem; prints per-block residuals.
int certify_command(const RunConfig& cfg, const std::string& point_path,
                    std::ostream& out, double tol = 1e-6);

}  // namespace projsplit
