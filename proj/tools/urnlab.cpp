// urnlab — simulation and statistical verification of adaptively
// reinforced two-color urn processes.

#include <CLI11.hpp>

#include "urnlab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"urnlab: reinforced-urn simulation and verification"};
  app.require_subcommand(1);

  urnlab::cli::SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "run a trajectory batch and emit files");
  simulate->add_option("--config", sim.config_path, "run configuration file")->required();
  simulate->add_option("--out", sim.out_dir, "output directory")->required();
  simulate->add_option("--seed", sim.seed, "override run.seed");
  simulate->add_option("--reps", sim.replications, "override run.replications");
  simulate->add_option("--horizon", sim.horizon, "override run.horizon");
  simulate->add_option("--multiplier", sim.multiplier, "override run.proxy_multiplier");
  simulate->add_option("--grid", sim.grid, "record grid: pow2 | linear:<spacing> | n0,n1,...");
  simulate->add_option("--threads", sim.threads, "worker threads (URNLAB_THREADS, then hardware)");

  urnlab::cli::VerifyOptions ver;
  ver.acceptance_path = "configs/acceptance.cfg";
  auto* verify = app.add_subcommand("verify", "run theorem suites against the acceptance file");
  verify->add_option("--acceptance", ver.acceptance_path, "acceptance file (thresholds + configs)");
  verify->add_option("--suite", ver.suite, "suite id T1..T10 or 'all'");
  verify->add_option("--seed", ver.seed, "override the pinned global seed");
  verify->add_option("--out", ver.out_dir, "directory for report.txt / report.json");
  verify->add_option("--threads", ver.threads, "worker threads");

  urnlab::cli::SweepOptions sweep;
  auto* sw = app.add_subcommand("sweep", "Cartesian-product batches over declared axes");
  sw->add_option("--config", sweep.config_path, "run configuration with a [sweep] section")
      ->required();
  sw->add_option("--out", sweep.out_dir, "output directory")->required();
  sw->add_option("--seed", sweep.seed, "override run.seed");
  sw->add_option("--reps", sweep.replications, "override run.replications");
  sw->add_option("--threads", sweep.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : urnlab::cli::kExitUsage;
  }

  if (simulate->parsed()) return urnlab::cli::cmd_simulate(sim);
  if (verify->parsed()) return urnlab::cli::cmd_verify(ver);
  if (sw->parsed()) return urnlab::cli::cmd_sweep(sweep);
  return urnlab::cli::kExitUsage;
}
