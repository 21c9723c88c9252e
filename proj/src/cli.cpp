#include "qring/cli.hpp"

#include "qring/ensemble.hpp"
#include "qring/error.hpp"
#include "qring/measurement.hpp"
#include "qring/output.hpp"
#include "qring/version.hpp"

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

namespace qring::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

SimulationConfig resolve_config(const Options& opts, bool alpha_is_list) {
    SimulationConfig cfg;
    if (!opts.config_path.empty()) cfg = load_config(opts.config_path, cfg);
    if (opts.seed) apply_setting(cfg, "run.seed", std::to_string(*opts.seed));
    if (opts.alpha) apply_setting(cfg, alpha_is_list ? "sweep.alphas" : "trigger.alpha", *opts.alpha);
    if (opts.trials) apply_setting(cfg, "sweep.trials", std::to_string(*opts.trials));
    if (opts.threads) apply_setting(cfg, "run.threads", std::to_string(*opts.threads));
    if (opts.grid_points) apply_setting(cfg, "grid.n_points", std::to_string(*opts.grid_points));
    if (opts.dt) apply_setting(cfg, "evolve.dt", format_double(*opts.dt));
    if (opts.t_final) apply_setting(cfg, "evolve.t_final", format_double(*opts.t_final));
    for (const auto& kv : opts.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

fs::path resolve_out_dir(const Options& opts) {
    if (!opts.out_dir.empty()) return opts.out_dir;
    if (const char* env = std::getenv("QRING_OUT_DIR"); env && *env) return env;
    return "qring_out";
}

namespace {

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

int report_error(std::ostream& err, int code, const std::string& status, const std::string& message) {
    ordered_json rec;
    rec["status"] = status;
    rec["exit_code"] = code;
    rec["message"] = message;
    err << rec.dump() << '\n';
    return code;
}

void apply_threads(const SimulationConfig& cfg) {
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
}

ordered_json manifest_base(const SimulationConfig& cfg, const std::string& command, const std::string& started) {
    ordered_json m;
    m["version"] = kVersion;
    m["command"] = command;
    m["config_hash"] = config_hash(cfg);
    m["master_seed"] = cfg.master_seed;
    ordered_json c = ordered_json::object();
    for (const auto& [k, v] : config_entries(cfg)) c[k] = v;
    m["config"] = c;
    m["started_at"] = started;
    return m;
}

void write_manifest(const fs::path& dir, ordered_json manifest, std::vector<std::string> outputs) {
    outputs.push_back("manifest.json");
    manifest["finished_at"] = utc_now();
    manifest["outputs"] = outputs;
    std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write manifest in '" + dir.string() + "'");
    out << manifest.dump(2) << '\n';
}

ordered_json regime_json(const SimulationConfig& cfg, const SystemState& initial) {
    const auto c = check_collective_condition(cfg.model);
    const auto t = check_trigger_condition(cfg.model);
    const auto w = timescale_window(timescale_params(initial, cfg.model, cfg.typical_size), cfg.model,
                                    cfg.evolve.t_final);
    ordered_json j = ordered_json::object();
    std::istringstream lines(format_reports(c, t, w));
    std::string line;
    while (std::getline(lines, line)) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos) j[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return j;
}

}  // namespace

int cmd_run(const Options& opts, std::ostream& out, std::ostream& err) {
    SimulationConfig cfg;
    try {
        cfg = resolve_config(opts);
    } catch (const Error& e) {
        return report_error(err, kExitConfigError, "config error", e.what());
    }
    apply_threads(cfg);
    const std::string started = utc_now();
    const fs::path dir = resolve_out_dir(opts);
    try {
        fs::create_directories(dir);
        const GridPtr grid = make_grid(cfg.grid_points);
        const std::string hash = config_hash(cfg);
        const double alpha = cfg.trigger.alpha;

        const SystemState initial = initial_state(cfg, alpha, derive_trial_seed(cfg.master_seed, 0), grid);
        std::vector<double> initial_system;
        if (initial.system) initial_system = initial.system->density();

        std::vector<Snapshot> snapshots;
        DiagnosticsLog log;
        TrialOptions topts;
        topts.grid = grid;
        topts.observer = [&](const Snapshot& s) { snapshots.push_back(s); };
        topts.diagnostics = &log;
        const TrialRecord rec = run_trial(cfg, alpha, cfg.master_seed, 0, topts);

        write_snapshots_csv(dir / "snapshots.csv", hash, *grid, snapshots, initial_system);
        write_diagnostics_csv(dir / "diagnostics.csv", hash, log);
        ordered_json trial = trial_record_json(rec);
        trial["regime"] = regime_json(cfg, initial);
        {
            std::ofstream f(dir / "trial.json", std::ios::binary | std::ios::trunc);
            if (!f) throw Error("cannot write trial record");
            f << trial.dump(2) << '\n';
        }
        ordered_json manifest = manifest_base(cfg, "run", started);
        manifest["wall_time_seconds"] = rec.wall_time;
        write_manifest(dir, manifest, {"snapshots.csv", "diagnostics.csv", "trial.json"});

        out << "outcome: system=" << to_string(rec.outcome.system_side)
            << " meter=" << to_string(rec.outcome.meter_side)
            << " consistent=" << (rec.outcome.consistent ? "true" : "false")
            << " P+=" << format_double(rec.outcome.system_mass_positive)
            << " B=" << format_double(rec.outcome.meter_reading) << "\n"
            << "energy_drift=" << format_double(rec.energy_drift) << " norm_drift=" << format_double(rec.norm_drift)
            << " wall_time=" << rec.wall_time << "s\n";
        for (const auto& w : rec.warnings) out << "warning: " << w << "\n";
        if (rec.failed) return report_error(err, kExitNumericalFailure, "numerical failure", rec.failure);
    } catch (const ConfigError& e) {
        return report_error(err, kExitConfigError, "config error", e.what());
    } catch (const Error& e) {
        return report_error(err, kExitNumericalFailure, "numerical failure", e.what());
    } catch (const fs::filesystem_error& e) {
        return report_error(err, kExitConfigError, "config error", e.what());
    }
    return kExitOk;
}

int cmd_sweep(const Options& opts, std::ostream& out, std::ostream& err) {
    SimulationConfig cfg;
    try {
        cfg = resolve_config(opts, true);
    } catch (const Error& e) {
        return report_error(err, kExitConfigError, "config error", e.what());
    }
    if (!cfg.with_system) {
        return report_error(err, kExitConfigError, "config error", "a sweep needs trigger.enabled = true");
    }
    apply_threads(cfg);
    const std::string started = utc_now();
    const fs::path dir = resolve_out_dir(opts);
    try {
        fs::create_directories(dir);
        const auto alphas = cfg.sweep_alphas();
        std::vector<TrialRecord> records;
        const FrequencyTable table = sweep(cfg, alphas, cfg.sweep.trials_per_alpha, cfg.master_seed, &records);
        const std::string hash = config_hash(cfg);
        write_frequency_csv(dir / "frequency.csv", hash, table);
        write_trials_jsonl(dir / "trials.jsonl", records);

        ordered_json manifest = manifest_base(cfg, "sweep", started);
        ordered_json times = ordered_json::array();
        int failures = 0;
        for (const auto& r : records) {
            times.push_back(r.wall_time);
            failures += r.failed ? 1 : 0;
        }
        manifest["trial_wall_time_seconds"] = times;
        manifest["failed_trials"] = failures;
        write_manifest(dir, manifest, {"frequency.csv", "trials.jsonl"});

        out << "sin2_alpha  trials  neg  pos  undecided  mismatch  freq_negative  error_fraction\n";
        for (const auto& r : table.rows) {
            char line[160];
            std::snprintf(line, sizeof line, "%10.4f  %6d  %3d  %3d  %9d  %8d  %13.4f  %14.4f\n", r.sin2_alpha,
                          r.trials, r.n_negative, r.n_positive, r.n_undecided, r.n_mismatch, r.freq_negative,
                          r.error_fraction);
            out << line;
        }
        if (table.rows.size() >= 3) {
            const auto d = born_deviation(table);
            out << "born_deviation: max_abs=" << format_double(d.max_abs) << " rms=" << format_double(d.rms)
                << " monotone=" << (d.monotone ? "true" : "false") << "\n";
        }
        if (failures > 0) out << "failed trials: " << failures << "\n";
    } catch (const ConfigError& e) {
        return report_error(err, kExitConfigError, "config error", e.what());
    } catch (const Error& e) {
        return report_error(err, kExitNumericalFailure, "numerical failure", e.what());
    } catch (const fs::filesystem_error& e) {
        return report_error(err, kExitConfigError, "config error", e.what());
    }
    return kExitOk;
}

int cmd_check(const Options& opts, std::ostream& out, std::ostream& err) {
    SimulationConfig cfg;
    try {
        cfg = resolve_config(opts);
        const GridPtr grid = make_grid(cfg.grid_points);
        const SystemState initial =
            initial_state(cfg, cfg.trigger.alpha, derive_trial_seed(cfg.master_seed, 0), grid);
        const auto c = check_collective_condition(cfg.model);
        const auto t = check_trigger_condition(cfg.model);
        const auto ts = timescale_params(initial, cfg.model, cfg.typical_size);
        const auto w = timescale_window(ts, cfg.model, cfg.evolve.t_final);
        out << "timescale.delta_e = " << format_double(ts.delta_e) << "\n"
            << "timescale.typical_size = " << format_double(ts.typical_size) << "\n"
            << format_reports(c, t, w);
        if (w.window_empty) out << "warning: empty timescale window\n";
    } catch (const Error& e) {
        return report_error(err, kExitConfigError, "config error", e.what());
    }
    return kExitOk;
}

}  // namespace qring::cli
