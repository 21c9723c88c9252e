#include "qring/ensemble.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace qring {

SystemState initial_state(const SimulationConfig& cfg, double alpha, std::uint64_t seed, const GridPtr& grid,
                          RandomDraw* draw_out) {
    SystemState state;
    state.grid = grid;
    auto [fields, draw] = sample_apparatus_initial(cfg.model, seed, grid);
    state.apparatus = std::move(fields);
    if (cfg.with_system) {
        TriggerParams t = cfg.trigger;
        t.alpha = alpha;
        t.validate();
        state.system = system_initial(t, grid);
    }
    if (draw_out) *draw_out = std::move(draw);
    return state;
}

namespace {

std::vector<std::string> regime_warnings(const SimulationConfig& cfg, const SystemState& initial) {
    std::vector<std::string> w;
    if (!check_collective_condition(cfg.model).pass) w.emplace_back("collective condition fails");
    if (!check_trigger_condition(cfg.model).magnitude_pass) w.emplace_back("trigger condition fails");
    const auto window = timescale_window(timescale_params(initial, cfg.model, cfg.typical_size), cfg.model,
                                         cfg.evolve.t_final);
    if (!window.pass) w.emplace_back("timescale window fails");
    return w;
}

}  // namespace

TrialRecord run_trial(const SimulationConfig& cfg, double alpha, std::uint64_t master_seed,
                      std::uint64_t trial_index, const TrialOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    const GridPtr grid = opts.grid ? opts.grid : make_grid(cfg.grid_points);

    TrialRecord rec;
    rec.master_seed = master_seed;
    rec.trial_index = trial_index;
    rec.alpha = alpha;
    rec.has_system = cfg.with_system;

    SystemState state = initial_state(cfg, alpha, derive_trial_seed(master_seed, trial_index), grid, &rec.draw);
    rec.warnings = regime_warnings(cfg, state);

    try {
        DiagnosticsLog log = evolve(state, cfg.model, cfg.evolve, opts.observer, opts.backend);
        rec.energy_drift = log.max_energy_drift();
        rec.norm_drift = log.max_norm_drift();
        rec.dt_used = log.dt_used;
        rec.outcome = classify(state, cfg.margin);
        if (opts.diagnostics) *opts.diagnostics = std::move(log);
    } catch (const EvolveFailure& e) {
        rec.failed = true;
        rec.failure = e.what();
        rec.energy_drift = e.partial_log().max_energy_drift();
        rec.norm_drift = e.partial_log().max_norm_drift();
        rec.dt_used = e.partial_log().dt_used;
        rec.outcome = Outcome{};
        if (opts.diagnostics) *opts.diagnostics = e.partial_log();
    }
    if (opts.final_state) *opts.final_state = std::move(state);
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

FrequencyTable aggregate(const std::vector<TrialRecord>& records, const std::vector<double>& alphas) {
    FrequencyTable table;
    for (double a : alphas) {
        FrequencyRow row;
        row.alpha = a;
        const double s = std::sin(a);
        row.sin2_alpha = s * s;
        for (const auto& r : records) {
            if (r.alpha != a) continue;
            ++row.trials;
            const auto& o = r.outcome;
            if (r.failed) {
                ++row.n_failed;
                ++row.n_undecided;
            } else if (o.consistent) {
                (o.system_side == Side::Negative ? row.n_negative : row.n_positive)++;
            } else if (o.system_side != Side::Undecided && o.meter_side != Side::Undecided) {
                ++row.n_mismatch;
            } else {
                ++row.n_undecided;
            }
            if (!r.failed && o.system_side == Side::Negative && o.meter_side == Side::Positive) ++row.n_literal;
        }
        const int decided = row.n_negative + row.n_positive;
        row.freq_negative = decided > 0 ? static_cast<double>(row.n_negative) / decided
                                        : std::numeric_limits<double>::quiet_NaN();
        if (row.trials > 0) {
            row.freq_literal_caption = static_cast<double>(row.n_literal) / row.trials;
            row.error_fraction = static_cast<double>(row.n_mismatch + row.n_undecided) / row.trials;
        }
        table.rows.push_back(row);
    }
    return table;
}

FrequencyTable sweep(const SimulationConfig& cfg, const std::vector<double>& alphas, int trials_per_alpha,
                     std::uint64_t master_seed, std::vector<TrialRecord>* records_out) {
    if (trials_per_alpha < 1) throw ConfigError("sweep.trials must be >= 1");
    const GridPtr grid = make_grid(cfg.grid_points);
    const auto n_alpha = static_cast<std::ptrdiff_t>(alphas.size());
    const std::ptrdiff_t total = n_alpha * trials_per_alpha;
    std::vector<TrialRecord> records(static_cast<std::size_t>(total));

    TrialOptions opts;
    opts.grid = grid;
    // Trials are the unit of parallelism; the kernels inside run serially per worker.
    opts.backend = kernels::Backend::Serial;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t job = 0; job < total; ++job) {
        const double alpha = alphas[static_cast<std::size_t>(job / trials_per_alpha)];
        const auto trial = static_cast<std::uint64_t>(job % trials_per_alpha);
        records[static_cast<std::size_t>(job)] = run_trial(cfg, alpha, master_seed, trial, opts);
    }

    FrequencyTable table = aggregate(records, alphas);
    if (records_out) *records_out = std::move(records);
    return table;
}

BornDeviation born_deviation(const FrequencyTable& table) {
    if (table.rows.size() < 3) throw Error("born_deviation needs at least 3 alpha rows");
    std::vector<const FrequencyRow*> rows;
    for (const auto& r : table.rows) rows.push_back(&r);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const FrequencyRow* a, const FrequencyRow* b) { return a->sin2_alpha < b->sin2_alpha; });

    BornDeviation d;
    d.monotone = true;
    double sum_sq = 0.0;
    int counted = 0;
    double previous = -std::numeric_limits<double>::infinity();
    for (const auto* r : rows) {
        if (std::isnan(r->freq_negative)) {
            d.monotone = false;
            continue;
        }
        const double dev = r->freq_negative - r->sin2_alpha;
        d.max_abs = std::max(d.max_abs, std::abs(dev));
        sum_sq += dev * dev;
        ++counted;
        if (r->freq_negative < previous) d.monotone = false;
        previous = r->freq_negative;
    }
    if (counted == 0) {
        d.max_abs = d.rms = std::numeric_limits<double>::quiet_NaN();
    } else {
        d.rms = std::sqrt(sum_sq / counted);
    }
    return d;
}

}  // namespace qring
