#pragma once

#include "qring/config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qring::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalFailure = 3;

/// Command-line inputs before resolution against the config file.
struct Options {
    std::string config_path;
    std::vector<std::string> sets;  ///< generic `key=value` overrides, applied last
    std::optional<std::uint64_t> seed;
    std::optional<std::string> alpha;
    std::optional<int> trials;
    std::optional<int> threads;
    std::optional<int> grid_points;
    std::optional<double> dt;
    std::optional<double> t_final;
    std::string out_dir;  ///< empty: $QRING_OUT_DIR, then ./qring_out
};

/// defaults -> config file -> dedicated flags -> --set overrides.
SimulationConfig resolve_config(const Options& opts, bool alpha_is_list = false);

std::filesystem::path resolve_out_dir(const Options& opts);

int cmd_run(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_check(const Options& opts, std::ostream& out, std::ostream& err);

}  // namespace qring::cli
