#include "qring/measurement.hpp"

#include "qring/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qring {

double background_slope(double theta, const ModelParams& p) {
    return p.potential_on ? -std::sin(2.0 * theta) : 0.0;
}

CollectiveConditionReport check_collective_condition(const ModelParams& p) {
    CollectiveConditionReport r;
    r.lhs = p.sigma * p.sigma / (2.0 * p.mass) + std::abs(p.sigma * background_slope(p.sigma, p));
    r.rhs = std::abs(p.lambda) / 2.0;
    r.pass = r.lhs < r.rhs;
    return r;
}

TriggerConditionReport check_trigger_condition(const ModelParams& p) {
    TriggerConditionReport r;
    r.argument = p.sigma / std::sqrt(static_cast<double>(p.n_apparatus));
    r.lhs = r.argument * background_slope(r.argument, p);
    r.rhs = p.lambda;
    r.literal_pass = r.lhs < r.rhs;
    r.magnitude_pass = std::abs(r.lhs) < std::abs(r.rhs);
    return r;
}

TimescaleReport timescale_window(const TimescaleParams& ts, const ModelParams& p, double t_measure) {
    TimescaleReport r;
    double de = ts.delta_e;
    if (de < 0.0) {
        r.negative_energy = true;
        de = 0.0;
    }
    const double n = static_cast<double>(p.n_apparatus);
    const double single = std::sqrt(p.mass * de / 2.0);
    r.log_t_single = single * ts.typical_size / p.hbar;
    r.log_t_collective = std::sqrt(n * p.mass * de / 2.0) * ts.typical_size / p.hbar;
    r.log_ratio = r.log_t_collective - r.log_t_single;
    r.log_ratio_factored = (std::sqrt(n) - 1.0) * single * (ts.typical_size / p.hbar);
    r.t_single = std::exp(r.log_t_single);
    r.t_collective = std::exp(r.log_t_collective);
    r.t_measure = t_measure;
    r.window_empty = !(r.log_t_collective > r.log_t_single);
    r.pass = !r.window_empty && t_measure > r.t_single && r.t_collective >= 100.0 * t_measure;
    return r;
}

TimescaleParams timescale_params(const SystemState& initial, const ModelParams& p, double typical_size) {
    if (typical_size <= 0.0) throw ConfigError("measure.typical_size must be > 0");
    TimescaleParams ts;
    ts.typical_size = typical_size;
    ts.delta_e = total_energy(initial, p) / std::max(1, initial.particle_count());
    return ts;
}

const char* to_string(Side s) {
    switch (s) {
        case Side::Positive: return "POSITIVE";
        case Side::Negative: return "NEGATIVE";
        case Side::Undecided: break;
    }
    return "UNDECIDED";
}

Side side_of(double positive_fraction, double margin) {
    if (positive_fraction > 0.5 + margin / 2.0) return Side::Positive;
    if (positive_fraction < 0.5 - margin / 2.0) return Side::Negative;
    return Side::Undecided;
}

Outcome classify(const SystemState& state, double margin) {
    if (!(margin >= 0.0 && margin < 1.0)) throw ConfigError("measure.margin must lie in [0, 1)");
    const Grid& g = *state.grid;
    Outcome o;
    if (state.system) {
        o.system_mass_positive = positive_mass(state.system->density(), g);
        o.system_side = side_of(o.system_mass_positive, margin);
    }
    // The readout sums the apparatus only, so the model parameters do not enter.
    o.meter_reading = readout_sign(order_variable(state, ModelParams{}, true), g);
    o.meter_side = side_of((o.meter_reading + 1.0) / 2.0, margin);
    o.consistent = o.system_side == o.meter_side && o.system_side != Side::Undecided;
    return o;
}

std::string format_reports(const CollectiveConditionReport& c, const TriggerConditionReport& t,
                           const TimescaleReport& w) {
    std::ostringstream os;
    os.precision(17);
    auto yes = [](bool b) { return b ? "pass" : "fail"; };
    os << "collective.lhs = " << c.lhs << "\n"
       << "collective.rhs = " << c.rhs << "\n"
       << "collective.result = " << yes(c.pass) << "\n"
       << "trigger.argument = " << t.argument << "\n"
       << "trigger.lhs = " << t.lhs << "\n"
       << "trigger.rhs = " << t.rhs << "\n"
       << "trigger.literal = " << yes(t.literal_pass) << "\n"
       << "trigger.magnitude = " << yes(t.magnitude_pass) << "\n"
       << "timescale.log_t_single = " << w.log_t_single << "\n"
       << "timescale.log_t_collective = " << w.log_t_collective << "\n"
       << "timescale.log_ratio = " << w.log_ratio << "\n"
       << "timescale.log_ratio_factored = " << w.log_ratio_factored << "\n"
       << "timescale.t_single = " << w.t_single << "\n"
       << "timescale.t_collective = " << w.t_collective << "\n"
       << "timescale.t_measure = " << w.t_measure << "\n"
       << "timescale.window_empty = " << (w.window_empty ? "true" : "false") << "\n"
       << "timescale.negative_energy = " << (w.negative_energy ? "true" : "false") << "\n"
       << "timescale.result = " << yes(w.pass) << "\n";
    return os.str();
}

}  // namespace qring
