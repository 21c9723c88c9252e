#pragma once

#include "qring/init.hpp"
#include "qring/integrator.hpp"
#include "qring/model.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qring {

struct SweepConfig {
    std::vector<double> alphas;  ///< empty selects default_sweep_alphas()
    int trials_per_alpha = 100;
};

/// Every tunable of a run, with defaults materialised.
struct SimulationConfig {
    int grid_points = 512;
    ModelParams model;
    TriggerParams trigger;
    bool with_system = true;  ///< false runs the apparatus alone
    EvolveConfig evolve{.snapshot_every = 1000};  ///< snapshots every 0.5 time units at the default dt
    double margin = 0.2;
    double typical_size = 1.5707963267948966;
    SweepConfig sweep;
    std::uint64_t master_seed = 1;
    int threads = 0;  ///< 0 = available parallelism

    void validate() const;
    std::vector<double> sweep_alphas() const;
};

/// alpha = asin(sqrt(x)) for x = 0, 0.1, ..., 1.
std::vector<double> default_sweep_alphas();

/// Applies one `key = value` setting (dotted key names such as `model.lambda`).
/// Throws ConfigError on unknown keys or malformed values.
void apply_setting(SimulationConfig& cfg, const std::string& key, const std::string& value);

/// Parses flat `key = value` text; `#` starts a comment, blank lines are ignored.
SimulationConfig parse_config(const std::string& text, SimulationConfig base = {});
SimulationConfig load_config(const std::string& path, SimulationConfig base = {});

/// Canonical rendering of every key, sorted, 17 significant digits.
std::map<std::string, std::string> config_entries(const SimulationConfig& cfg);
std::string render_config(const SimulationConfig& cfg);

/// 64-bit FNV-1a of the canonical config and code version, as 16 hex digits.
std::string config_hash(const SimulationConfig& cfg);

}  // namespace qring
