#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "spincal/runner.hpp"

using namespace spincal;

namespace {

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& config_path,
                bool& seed_flag, int& flux_val, bool& flux_flag,
                std::string& lambda_text) {
  cmd->add_option("--config", config_path, "JSON config file; flags override");
  cmd->add_option("--scenario", cfg.scenario, "catalog scenario name");
  cmd->add_option("--samples", cfg.samples, "sample-point count");
  cmd->add_option("--seed", cfg.seed, "RNG seed (required for sampled runs)")
      ->each([&seed_flag](const std::string&) { seed_flag = true; });
  cmd->add_option("--tol", cfg.tol, "override the per-check tolerance");
  cmd->add_option("--grid", cfg.grid, "lattice sites per axis");
  cmd->add_option("--flux", flux_val, "line-bundle flux quantum")
      ->each([&flux_flag](const std::string&) { flux_flag = true; });
  cmd->add_option("--eigs", cfg.eigs, "eigenpair count");
  cmd->add_option("--h", cfg.h, "finite-difference step for metric families");
  cmd->add_option("--eps", cfg.eps_coupling, "coupling constant of the functional");
  cmd->add_option("--lambda", lambda_text, "eigenvalue (number or 'auto')");
  cmd->add_option("--k", cfg.k_spec, "perturbation mode (diag-sin|conformal|offdiag-cos)");
  cmd->add_option("--field", cfg.field_spec, "spinor-field literal (JSON)");
  cmd->add_option("--radius", cfg.radius, "sphere radius parameter");
  cmd->add_option("--out", cfg.out_path, "report output path");
  cmd->add_option("--format", cfg.format, "report format: json|csv");
}

int dispatch(RunConfig cfg, const std::string& config_path) {
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot open config '" << config_path << "'\n";
      return 1;
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    try {
      RunConfig file_cfg = parse_config(text);
      // flags override file values where given
      if (cfg.scenario.empty()) cfg.scenario = file_cfg.scenario;
      if (!cfg.seed_set && file_cfg.seed_set) {
        cfg.seed = file_cfg.seed;
        cfg.seed_set = true;
      }
      if (cfg.tol <= 0) cfg.tol = file_cfg.tol;
      if (!cfg.flux) cfg.flux = file_cfg.flux;
      if (!cfg.lambda) cfg.lambda = file_cfg.lambda;
      if (cfg.k_spec.empty()) cfg.k_spec = file_cfg.k_spec;
      if (cfg.field_spec.empty()) cfg.field_spec = file_cfg.field_spec;
      if (cfg.out_path.empty()) cfg.out_path = file_cfg.out_path;
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return 1;
    }
  }

  RunResult res = run(cfg);
  if (cfg.out_path.empty()) std::cout << res.report.to_json(true).dump(2) << "\n";
  if (res.exit_code == 1) std::cerr << "error: run failed; see the report diagnostics\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-c spinor calculus verification laboratory"};
  app.require_subcommand(1);

  bool list_json = false;
  auto* list = app.add_subcommand("list-scenarios", "catalog table");
  list->add_flag("--json", list_json, "machine-readable listing");

  RunConfig cfg;
  std::string config_path;
  bool seed_flag = false;
  bool flux_flag = false;
  int flux_val = 0;
  std::string lambda_text = "auto";

  auto* verify = app.add_subcommand("verify", "run an identity suite");
  verify->require_subcommand(1);
  static const char* kVerbs[] = {
      "gauss",      "dirac-gauss",         "omega-split",    "morel",
      "cylinder-curvature", "bala",        "commutator",
      "killing-to-parallel", "ricci-identity", "curvature-commutator"};
  std::vector<CLI::App*> verb_cmds;
  for (const char* verb : kVerbs) {
    auto* sub = verify->add_subcommand(verb, std::string("verify ") + verb);
    add_common(sub, cfg, config_path, seed_flag, flux_val, flux_flag, lambda_text);
    sub->add_option("--immersion", cfg.scenario, "immersion name (alias of --scenario)");
    verb_cmds.push_back(sub);
  }

  auto* spectrum_cmd = app.add_subcommand("spectrum", "lattice Dirac spectrum");
  add_common(spectrum_cmd, cfg, config_path, seed_flag, flux_val, flux_flag,
             lambda_text);

  auto* variation_cmd = app.add_subcommand("variation", "metric-variation identity");
  add_common(variation_cmd, cfg, config_path, seed_flag, flux_val, flux_flag,
             lambda_text);

  auto* frkim_cmd = app.add_subcommand("frkim", "coupled critical-point system");
  add_common(frkim_cmd, cfg, config_path, seed_flag, flux_val, flux_flag, lambda_text);

  auto* bound_cmd = app.add_subcommand("bound", "eigenvalue lower-bound margins");
  add_common(bound_cmd, cfg, config_path, seed_flag, flux_val, flux_flag, lambda_text);

  CLI11_PARSE(app, argc, argv);

  cfg.seed_set = seed_flag;
  if (flux_flag) cfg.flux = flux_val;
  if (lambda_text != "auto") {
    try {
      cfg.lambda = std::stod(lambda_text);
    } catch (const std::exception&) {
      std::cerr << "bad --lambda value '" << lambda_text << "'\n";
      return 1;
    }
  }

  try {
    if (list->parsed()) {
      if (list_json)
        std::cout << list_scenarios_json().dump(2) << "\n";
      else
        std::cout << list_scenarios_text();
      return 0;
    }
    if (verify->parsed()) {
      for (size_t i = 0; i < verb_cmds.size(); ++i)
        if (verb_cmds[i]->parsed()) {
          cfg.command = std::string("verify.") + kVerbs[i];
          return dispatch(cfg, config_path);
        }
    }
    if (spectrum_cmd->parsed()) {
      cfg.command = "spectrum";
      return dispatch(cfg, config_path);
    }
    if (variation_cmd->parsed()) {
      cfg.command = "variation";
      return dispatch(cfg, config_path);
    }
    if (frkim_cmd->parsed()) {
      cfg.command = "frkim";
      return dispatch(cfg, config_path);
    }
    if (bound_cmd->parsed()) {
      cfg.command = "bound";
      return dispatch(cfg, config_path);
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 1;
}
