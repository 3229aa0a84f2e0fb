#pragma once

#include <optional>

#include "spincal/report.hpp"
#include "spincal/scenarios.hpp"

namespace spincal {

/// One batch run: a verb, its target, and the numeric knobs. Unknown config
/// keys are rejected at parse time; sampled commands require a seed.
struct RunConfig {
  std::string command;  // verify sub-verbs use "verify.<identity>"
  std::string scenario;
  int samples = 100;
  unsigned long long seed = 0;
  bool seed_set = false;
  double tol = 0.0;  // 0: per-check default
  int grid = 16;
  std::optional<int> flux;
  int eigs = 8;
  double h = 1e-3;
  double eps_coupling = 1.0;
  std::optional<double> lambda;  // absent: pick the best eigenvalue ("auto")
  double radius = 1.0;
  std::string out_path;
  std::string format = "json";  // json|csv
  std::string k_spec;           // symmetric-tensor literal for variation runs
  std::string field_spec;       // spinor-field literal

  ScenarioParams scenario_params() const;
};

/// Parses the JSON config file (if any) and applies overrides; flag values
/// win over file values.
RunConfig parse_config(const std::string& json_text);

struct RunResult {
  int exit_code = 0;  // 0 pass, 2 check failure, 1 config/numerical error
  Report report;
};

/// Dispatches one config; never throws (errors become exit code 1 with a
/// diagnostic record).
RunResult run(const RunConfig& config);

/// Worker count for sample-parallel checks, from SPINCAL_WORKERS (default 1;
/// results are identical for any value, reduction order is fixed).
int worker_count();

std::string list_scenarios_text();
JsonValue list_scenarios_json();

}  // namespace spincal
