#pragma once

#include "qring/config.hpp"
#include "qring/init.hpp"
#include "qring/integrator.hpp"
#include "qring/measurement.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qring {

struct TrialRecord {
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;
    double alpha = 0.0;
    bool has_system = true;
    Outcome outcome;
    double energy_drift = 0.0;  ///< max relative drift over the run
    double norm_drift = 0.0;    ///< max |norm - 1| over the run
    double dt_used = 0.0;
    double wall_time = 0.0;     ///< seconds; excluded from the reproducible outputs
    RandomDraw draw;
    bool failed = false;
    std::string failure;
    std::vector<std::string> warnings;  ///< failing regime conditions
};

/// Initial state of one trial: seeded apparatus plus the trigger (if enabled).
SystemState initial_state(const SimulationConfig& cfg, double alpha, std::uint64_t seed,
                          const GridPtr& grid, RandomDraw* draw_out = nullptr);

struct TrialOptions {
    GridPtr grid;                      ///< shared grid; built from the config when null
    SnapshotObserver observer;
    DiagnosticsLog* diagnostics = nullptr;
    SystemState* final_state = nullptr;
    kernels::Backend backend = kernels::Backend::Parallel;
};

/// init -> evolve -> classify for one seeded trial. A numerical blow-up is
/// recorded as a failed trial instead of being thrown.
TrialRecord run_trial(const SimulationConfig& cfg, double alpha, std::uint64_t master_seed,
                      std::uint64_t trial_index, const TrialOptions& opts = {});

struct FrequencyRow {
    double alpha = 0.0;
    double sin2_alpha = 0.0;
    int trials = 0;
    int n_negative = 0;   ///< consistent NEGATIVE (system and meter agree)
    int n_positive = 0;   ///< consistent POSITIVE
    int n_undecided = 0;  ///< system or meter undecided, or the trial failed
    int n_mismatch = 0;   ///< system and meter decided on opposite sides
    int n_failed = 0;     ///< subset of n_undecided
    int n_literal = 0;    ///< system NEGATIVE with meter POSITIVE
    double freq_negative = 0.0;
    double freq_literal_caption = 0.0;
    double error_fraction = 0.0;
};

struct FrequencyTable {
    std::vector<FrequencyRow> rows;
};

/// Folds records into one row per alpha, in the order `alphas` lists them.
FrequencyTable aggregate(const std::vector<TrialRecord>& records, const std::vector<double>& alphas);

/// Runs trials_per_alpha trials for every alpha on the OpenMP worker pool.
/// Trial t uses stream (master_seed, t) for every alpha, so alphas share
/// apparatus draws and the result is independent of scheduling.
FrequencyTable sweep(const SimulationConfig& cfg, const std::vector<double>& alphas, int trials_per_alpha,
                     std::uint64_t master_seed, std::vector<TrialRecord>* records_out = nullptr);

struct BornDeviation {
    double max_abs = 0.0;
    double rms = 0.0;
    bool monotone = false;
};

/// Deviation of freq_negative from sin^2(alpha). Needs at least three rows.
BornDeviation born_deviation(const FrequencyTable& table);

}  // namespace qring
