#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "projsplit/acceptance.hpp"
#include "projsplit/config.hpp"
#include "projsplit/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"projective splitting solver"};
  app.require_subcommand(1);

  std::string config_path, point_path;
  double tol_override = -1.0;
  long max_iters_override = -1;
  bool no_assertions = false;

  CLI::App* run_cmd = app.add_subcommand("run", "solve a configured problem");
  run_cmd->add_option("--config", config_path, "JSON config path")->required();
  run_cmd->add_option("--tol", tol_override, "stopping tolerance override");
  run_cmd->add_option("--max-iters", max_iters_override,
                      "iteration cap override");
  run_cmd->add_flag("--no-assertions", no_assertions,
                    "collect monitor statistics without throwing");

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check a config file and exit");
  validate_cmd->add_option("--config", config_path, "JSON config path")
      ->required();

  CLI::App* certify_cmd =
      app.add_subcommand("certify", "check a point against a problem");
  certify_cmd->add_option("--config", config_path, "JSON config path")
      ->required();
  certify_cmd->add_option("--point", point_path, "JSON point path")
      ->required();

  CLI::App* suite_cmd =
      app.add_subcommand("suite", "run the acceptance suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (suite_cmd->parsed()) {
      return projsplit::run_acceptance(std::cout) ? 0 : 2;
    }
    projsplit::RunConfig cfg = projsplit::load_config(config_path);
    if (validate_cmd->parsed()) {
      std::cout << "config ok: problem '" << cfg.problem.name << "', "
                << cfg.problem.spec.n() << " block(s)\n";
      return 0;
    }
    if (certify_cmd->parsed()) {
      return projsplit::certify_command(cfg, point_path, std::cout);
    }
    if (tol_override > 0.0) cfg.stopping.tol = tol_override;
    if (max_iters_override > 0) cfg.stopping.max_iters = max_iters_override;
    if (no_assertions) cfg.solver.assertions = false;
    const projsplit::RunOutcome outcome = projsplit::run_command(cfg);
    if (outcome.exit_code == 3) {
      std::cerr << "solver failure: " << outcome.failure_message << '\n';
    } else if (outcome.exit_code == 2) {
      std::cerr << "iteration cap reached before the tolerance\n";
    }
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
