#include "qring/config.hpp"

#include "qring/error.hpp"
#include "qring/version.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

namespace qring {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_plain_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ConfigError("invalid number for " + key + ": '" + text + "'");
    }
    return v;
}

// Accepts plain numbers and multiples of pi such as "pi/4", "3*pi/8", "0.5pi".
double parse_real(const std::string& key, const std::string& raw) {
    const std::string text = trim(raw);
    const auto pos = text.find("pi");
    if (pos == std::string::npos) return parse_plain_double(key, text);
    std::string coef = trim(text.substr(0, pos));
    if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
    double value = std::numbers::pi * (coef.empty() ? 1.0 : parse_plain_double(key, coef));
    std::string rest = trim(text.substr(pos + 2));
    if (!rest.empty()) {
        if (rest.front() != '/') throw ConfigError("invalid angle for " + key + ": '" + text + "'");
        value /= parse_plain_double(key, trim(rest.substr(1)));
    }
    return value;
}

long long parse_integer(const std::string& key, const std::string& raw) {
    const std::string text = trim(raw);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("invalid integer for " + key + ": '" + text + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& raw) {
    const std::string text = trim(raw);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("invalid unsigned integer for " + key + ": '" + text + "'");
    }
    return v;
}

int parse_int(const std::string& key, const std::string& raw) {
    const long long v = parse_integer(key, raw);
    if (v < -2147483647LL || v > 2147483647LL) throw ConfigError("integer out of range for " + key);
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& raw) {
    const std::string t = trim(raw);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError("invalid boolean for " + key + ": '" + t + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!trim(item).empty()) out.push_back(parse_real(key, item));
    }
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += fmt(v[i]);
    }
    return s;
}

using Setter = std::function<void(SimulationConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"grid.n_points", [](auto& c, auto& k, auto& v) { c.grid_points = parse_int(k, v); }},
        {"model.hbar", [](auto& c, auto& k, auto& v) { c.model.hbar = parse_real(k, v); }},
        {"model.mass", [](auto& c, auto& k, auto& v) { c.model.mass = parse_real(k, v); }},
        {"model.lambda", [](auto& c, auto& k, auto& v) { c.model.lambda = parse_real(k, v); }},
        {"model.n_apparatus", [](auto& c, auto& k, auto& v) { c.model.n_apparatus = parse_int(k, v); }},
        {"model.s2", [](auto& c, auto& k, auto& v) { c.model.s2 = parse_real(k, v); }},
        {"model.sigma", [](auto& c, auto& k, auto& v) { c.model.sigma = parse_real(k, v); }},
        {"model.meanfield_norm",
         [](auto& c, auto& k, auto& v) {
             const auto t = trim(v);
             if (t == "over_n") c.model.meanfield_norm = MeanfieldNorm::OverN;
             else if (t == "over_n_plus_1") c.model.meanfield_norm = MeanfieldNorm::OverNPlus1;
             else throw ConfigError("invalid value for " + k + ": '" + t + "' (over_n | over_n_plus_1)");
         }},
        {"model.include_system_in_meanfield",
         [](auto& c, auto& k, auto& v) { c.model.include_system_in_meanfield = parse_bool(k, v); }},
        {"model.potential_on", [](auto& c, auto& k, auto& v) { c.model.potential_on = parse_bool(k, v); }},
        {"trigger.enabled", [](auto& c, auto& k, auto& v) { c.with_system = parse_bool(k, v); }},
        {"trigger.alpha", [](auto& c, auto& k, auto& v) { c.trigger.alpha = parse_real(k, v); }},
        {"trigger.delta_theta", [](auto& c, auto& k, auto& v) { c.trigger.delta_theta = parse_real(k, v); }},
        {"trigger.p0", [](auto& c, auto& k, auto& v) { c.trigger.p0 = parse_real(k, v); }},
        {"evolve.dt", [](auto& c, auto& k, auto& v) { c.evolve.dt = parse_real(k, v); }},
        {"evolve.t_final", [](auto& c, auto& k, auto& v) { c.evolve.t_final = parse_real(k, v); }},
        {"evolve.snapshot_every", [](auto& c, auto& k, auto& v) { c.evolve.snapshot_every = parse_int(k, v); }},
        {"evolve.diagnostics_every",
         [](auto& c, auto& k, auto& v) { c.evolve.diagnostics_every = parse_int(k, v); }},
        {"evolve.energy_budget", [](auto& c, auto& k, auto& v) { c.evolve.energy_budget = parse_real(k, v); }},
        {"evolve.max_tightenings",
         [](auto& c, auto& k, auto& v) { c.evolve.max_tightenings = parse_int(k, v); }},
        {"measure.margin", [](auto& c, auto& k, auto& v) { c.margin = parse_real(k, v); }},
        {"measure.typical_size", [](auto& c, auto& k, auto& v) { c.typical_size = parse_real(k, v); }},
        {"sweep.alphas", [](auto& c, auto& k, auto& v) { c.sweep.alphas = parse_list(k, v); }},
        {"sweep.trials", [](auto& c, auto& k, auto& v) { c.sweep.trials_per_alpha = parse_int(k, v); }},
        {"run.seed", [](auto& c, auto& k, auto& v) { c.master_seed = parse_unsigned(k, v); }},
        {"run.threads", [](auto& c, auto& k, auto& v) { c.threads = parse_int(k, v); }},
    };
    return table;
}

}  // namespace

std::vector<double> default_sweep_alphas() {
    std::vector<double> alphas;
    for (int i = 0; i <= 10; ++i) alphas.push_back(std::asin(std::sqrt(i / 10.0)));
    return alphas;
}

std::vector<double> SimulationConfig::sweep_alphas() const {
    return sweep.alphas.empty() ? default_sweep_alphas() : sweep.alphas;
}

void SimulationConfig::validate() const {
    if (grid_points < 8 || grid_points % 2 != 0) throw ConfigError("grid.n_points must be even and >= 8");
    model.validate();
    trigger.validate();
    evolve.validate();
    if (!(margin >= 0.0 && margin < 1.0)) throw ConfigError("measure.margin must lie in [0, 1)");
    if (!(typical_size > 0.0)) throw ConfigError("measure.typical_size must be > 0");
    if (sweep.trials_per_alpha < 1) throw ConfigError("sweep.trials must be >= 1");
    for (double a : sweep.alphas) {
        TriggerParams t = trigger;
        t.alpha = a;
        t.validate();
    }
    if (threads < 0) throw ConfigError("run.threads must be >= 0");
}

void apply_setting(SimulationConfig& cfg, const std::string& key, const std::string& value) {
    const auto& table = setters();
    const auto it = table.find(trim(key));
    if (it == table.end()) throw ConfigError("unknown config key '" + trim(key) + "'");
    it->second(cfg, it->first, value);
}

SimulationConfig parse_config(const std::string& text, SimulationConfig base) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

SimulationConfig load_config(const std::string& path, SimulationConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::map<std::string, std::string> config_entries(const SimulationConfig& c) {
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    return {
        {"grid.n_points", std::to_string(c.grid_points)},
        {"model.hbar", fmt(c.model.hbar)},
        {"model.mass", fmt(c.model.mass)},
        {"model.lambda", fmt(c.model.lambda)},
        {"model.n_apparatus", std::to_string(c.model.n_apparatus)},
        {"model.s2", fmt(c.model.s2)},
        {"model.sigma", fmt(c.model.sigma)},
        {"model.meanfield_norm", c.model.meanfield_norm == MeanfieldNorm::OverN ? "over_n" : "over_n_plus_1"},
        {"model.include_system_in_meanfield", b(c.model.include_system_in_meanfield)},
        {"model.potential_on", b(c.model.potential_on)},
        {"trigger.enabled", b(c.with_system)},
        {"trigger.alpha", fmt(c.trigger.alpha)},
        {"trigger.delta_theta", fmt(c.trigger.delta_theta)},
        {"trigger.p0", fmt(c.trigger.p0)},
        {"evolve.dt", fmt(c.evolve.dt)},
        {"evolve.t_final", fmt(c.evolve.t_final)},
        {"evolve.snapshot_every", std::to_string(c.evolve.snapshot_every)},
        {"evolve.diagnostics_every", std::to_string(c.evolve.diagnostics_every)},
        {"evolve.energy_budget", fmt(c.evolve.energy_budget)},
        {"evolve.max_tightenings", std::to_string(c.evolve.max_tightenings)},
        {"measure.margin", fmt(c.margin)},
        {"measure.typical_size", fmt(c.typical_size)},
        {"sweep.alphas", join(c.sweep_alphas())},
        {"sweep.trials", std::to_string(c.sweep.trials_per_alpha)},
        {"run.seed", std::to_string(c.master_seed)},
        {"run.threads", std::to_string(c.threads)},
    };
}

std::string render_config(const SimulationConfig& cfg) {
    std::string out;
    for (const auto& [k, v] : config_entries(cfg)) out += k + " = " + v + "\n";
    return out;
}

std::string config_hash(const SimulationConfig& cfg) {
    // Thread count does not change any output byte, so it stays out of the hash.
    auto entries = config_entries(cfg);
    entries.erase("run.threads");
    std::string text = std::string("version=") + kVersion + "\n";
    for (const auto& [k, v] : entries) text += k + "=" + v + "\n";
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qring
