#pragma once

#include "qring/ensemble.hpp"
#include "qring/integrator.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace qring {

/// 17 significant digits; round-trips every double exactly.
std::string format_double(double v);

/// Columns: time, theta, phi2, system_density, initial_system_density.
void write_snapshots_csv(const std::filesystem::path& path, const std::string& manifest_hash, const Grid& grid,
                         const std::vector<Snapshot>& snapshots, const std::vector<double>& initial_system_density);

/// Columns: time, energy, energy_drift, norm_drift.
void write_diagnostics_csv(const std::filesystem::path& path, const std::string& manifest_hash,
                           const DiagnosticsLog& log);

/// Columns: alpha, sin2_alpha, trials, n_negative, n_positive, n_undecided,
/// n_mismatch, freq_negative, freq_literal_caption, error_fraction.
void write_frequency_csv(const std::filesystem::path& path, const std::string& manifest_hash,
                         const FrequencyTable& table);

/// Deterministic part of a trial record (wall time lives in the manifest).
nlohmann::ordered_json trial_record_json(const TrialRecord& rec);

void write_trials_jsonl(const std::filesystem::path& path, const std::vector<TrialRecord>& records);

/// Reads back the `# manifest_hash=` comment of a CSV written above.
std::string read_csv_manifest_hash(const std::filesystem::path& path);

}  // namespace qring
