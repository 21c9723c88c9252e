#include "qring/output.hpp"

#include "qring/error.hpp"

#include <cstdio>
#include <fstream>

namespace qring {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    return out;
}

void write_header(std::ofstream& out, const std::string& hash, const char* columns) {
    out << "# manifest_hash=" << hash << "\n" << columns << "\n";
}

}  // namespace

void write_snapshots_csv(const std::filesystem::path& path, const std::string& manifest_hash, const Grid& grid,
                         const std::vector<Snapshot>& snapshots, const std::vector<double>& initial_system_density) {
    auto out = open_output(path);
    write_header(out, manifest_hash, "time,theta,phi2,system_density,initial_system_density");
    const auto theta = grid.points();
    for (const auto& s : snapshots) {
        for (int j = 0; j < grid.size(); ++j) {
            out << format_double(s.time) << ',' << format_double(theta[j]) << ','
                << (s.order_variable.empty() ? "" : format_double(s.order_variable[j])) << ','
                << (s.system_density.empty() ? "" : format_double(s.system_density[j])) << ','
                << (initial_system_density.empty() ? "" : format_double(initial_system_density[j])) << '\n';
        }
    }
}

void write_diagnostics_csv(const std::filesystem::path& path, const std::string& manifest_hash,
                           const DiagnosticsLog& log) {
    auto out = open_output(path);
    write_header(out, manifest_hash, "time,energy,energy_drift,norm_drift");
    for (const auto& s : log.samples) {
        out << format_double(s.time) << ',' << format_double(s.energy) << ',' << format_double(s.energy_drift)
            << ',' << format_double(s.norm_drift) << '\n';
    }
}

void write_frequency_csv(const std::filesystem::path& path, const std::string& manifest_hash,
                         const FrequencyTable& table) {
    auto out = open_output(path);
    write_header(out, manifest_hash,
                 "alpha,sin2_alpha,trials,n_negative,n_positive,n_undecided,n_mismatch,freq_negative,"
                 "freq_literal_caption,error_fraction");
    for (const auto& r : table.rows) {
        out << format_double(r.alpha) << ',' << format_double(r.sin2_alpha) << ',' << r.trials << ','
            << r.n_negative << ',' << r.n_positive << ',' << r.n_undecided << ',' << r.n_mismatch << ','
            << format_double(r.freq_negative) << ',' << format_double(r.freq_literal_caption) << ','
            << format_double(r.error_fraction) << '\n';
    }
}

nlohmann::ordered_json trial_record_json(const TrialRecord& rec) {
    nlohmann::ordered_json j;
    j["master_seed"] = rec.master_seed;
    j["trial_index"] = rec.trial_index;
    j["alpha"] = rec.alpha;
    j["has_system"] = rec.has_system;
    j["outcome"] = {
        {"system_side", to_string(rec.outcome.system_side)},
        {"meter_side", to_string(rec.outcome.meter_side)},
        {"consistent", rec.outcome.consistent},
        {"system_mass_positive", rec.outcome.system_mass_positive},
        {"meter_reading", rec.outcome.meter_reading},
    };
    j["energy_drift"] = rec.energy_drift;
    j["norm_drift"] = rec.norm_drift;
    j["dt_used"] = rec.dt_used;
    j["failed"] = rec.failed;
    if (rec.failed) j["failure"] = rec.failure;
    j["warnings"] = rec.warnings;
    j["draw"] = {
        {"seed", rec.draw.seed},
        {"rejected", rec.draw.rejected},
        {"xi", rec.draw.xi},
        {"xi_prime", rec.draw.xi_prime},
    };
    return j;
}

void write_trials_jsonl(const std::filesystem::path& path, const std::vector<TrialRecord>& records) {
    auto out = open_output(path);
    for (const auto& r : records) out << trial_record_json(r).dump() << '\n';
}

std::string read_csv_manifest_hash(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::string line;
    const std::string tag = "# manifest_hash=";
    if (in && std::getline(in, line) && line.rfind(tag, 0) == 0) return line.substr(tag.size());
    return {};
}

}  // namespace qring
