#pragma once

#include "qring/model.hpp"

#include <string>

namespace qring {

/// Collective-mode condition: sigma^2/2m + |sigma V0'(sigma)| < |lambda|/2.
struct CollectiveConditionReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// Trigger condition (sigma/sqrt N) V0'(sigma/sqrt N) < lambda, reported both as
/// written and in magnitude form since V0' < 0 just right of the hilltop.
struct TriggerConditionReport {
    double argument = 0.0;  ///< sigma / sqrt(N)
    double lhs = 0.0;
    double rhs = 0.0;       ///< lambda
    bool literal_pass = false;
    bool magnitude_pass = false;
};

struct TimescaleParams {
    double delta_e = 0.0;                   ///< typical energy per particle
    double typical_size = 1.5707963267948966;  ///< a; barrier top to valley floor
};

/// Inverse tunnelling factors of a single particle and of the collective mode.
struct TimescaleReport {
    double log_t_single = 0.0;      ///< sqrt(m dE / 2) a / hbar
    double log_t_collective = 0.0;  ///< sqrt(N m dE / 2) a / hbar
    double log_ratio = 0.0;         ///< log_t_collective - log_t_single
    double log_ratio_factored = 0.0;  ///< (sqrt N - 1) sqrt(m dE / 2) a / hbar
    double t_single = 0.0;
    double t_collective = 0.0;
    double t_measure = 0.0;
    bool window_empty = false;      ///< t_collective <= t_single
    bool negative_energy = false;   ///< dE < 0 was clamped to 0
    bool pass = false;              ///< t_collective >= 100 t_measure and t_measure > t_single
};

/// Derivative of the background potential: V0'(theta) = -sin(2 theta).
double background_slope(double theta, const ModelParams& p);

CollectiveConditionReport check_collective_condition(const ModelParams& p);
TriggerConditionReport check_trigger_condition(const ModelParams& p);
TimescaleReport timescale_window(const TimescaleParams& ts, const ModelParams& p, double t_measure);

/// dE = E(0) / (number of particles) from the realised initial state.
TimescaleParams timescale_params(const SystemState& initial, const ModelParams& p,
                                 double typical_size = 1.5707963267948966);

enum class Side { Positive, Negative, Undecided };

const char* to_string(Side s);

struct Outcome {
    Side system_side = Side::Undecided;
    Side meter_side = Side::Undecided;
    bool consistent = false;
    double system_mass_positive = 0.5;  ///< P+ of |psi_0|^2; 0.5 without a system particle
    double meter_reading = 0.0;         ///< readout_sign of the apparatus order variable
};

/// Positive above 1/2 + margin/2, negative below 1/2 - margin/2, undecided in between.
Side side_of(double positive_fraction, double margin);

/// Decides which half-ring the system and the meter ended up in.
Outcome classify(const SystemState& state, double margin);

/// Multi-line `key = value` rendering of the regime reports.
std::string format_reports(const CollectiveConditionReport& c, const TriggerConditionReport& t,
                           const TimescaleReport& w);

}  // namespace qring
