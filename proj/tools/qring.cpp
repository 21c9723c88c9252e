#include "qring/cli.hpp"
#include "qring/version.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_common(CLI::App* cmd, qring::cli::Options& o) {
    cmd->add_option("--config", o.config_path, "Config file (flat key = value)");
    cmd->add_option("--set", o.sets, "Override one config key, e.g. --set model.lambda=-0.3");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--out-dir", o.out_dir, "Output directory (default $QRING_OUT_DIR or ./qring_out)");
    cmd->add_option("--grid-points", o.grid_points, "Grid points on the ring");
    cmd->add_option("--dt", o.dt, "Time step");
    cmd->add_option("--t-final", o.t_final, "Final time");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qring: self-consistent quantum ring measurement simulator"};
    app.set_version_flag("--version", qring::kVersion);
    app.require_subcommand(1);

    qring::cli::Options run_opts, sweep_opts, check_opts;

    auto* run = app.add_subcommand("run", "Evolve one trial and write snapshots, diagnostics and the trial record");
    add_common(run, run_opts);
    run->add_option("--alpha", run_opts.alpha, "Trigger angle in [0, pi/2] (accepts e.g. pi/4)");
    run->add_option("--trials", run_opts.trials, "Trials per alpha (sweep only; validated here too)");

    auto* sweep = app.add_subcommand("sweep", "Repeat trials over trigger angles and tabulate outcome frequencies");
    add_common(sweep, sweep_opts);
    sweep->add_option("--alpha", sweep_opts.alpha, "Comma-separated trigger angles");
    sweep->add_option("--trials", sweep_opts.trials, "Trials per alpha");

    auto* check = app.add_subcommand("check", "Print the regime-condition reports without running dynamics");
    add_common(check, check_opts);
    check->add_option("--alpha", check_opts.alpha, "Trigger angle used for the initial-energy estimate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qring::cli::kExitConfigError;
    }

    if (*run) return qring::cli::cmd_run(run_opts, std::cout, std::cerr);
    if (*sweep) return qring::cli::cmd_sweep(sweep_opts, std::cout, std::cerr);
    return qring::cli::cmd_check(check_opts, std::cout, std::cerr);
}
