#pragma once

#include "qring/grid.hpp"

#include <optional>
#include <span>
#include <vector>

namespace qring {

enum class MeanfieldNorm { OverN, OverNPlus1 };

struct ModelParams {
    double hbar = 0.02;
    double mass = 1.0;
    double lambda = -0.5;  ///< attractive when negative
    int n_apparatus = 100;
    double s2 = 0.1;       ///< initial packet variance parameter s^2
    double sigma = 0.1;    ///< spread of random packet centres and momenta
    MeanfieldNorm meanfield_norm = MeanfieldNorm::OverNPlus1;
    bool include_system_in_meanfield = true;
    bool potential_on = true;

    /// Throws ConfigError on hbar <= 0, mass <= 0, n_apparatus < 1, s2 <= 0 or sigma < 0.
    void validate() const;
};

/// All particle fields at one instant. Particle 0 is the measured system
/// (optional); particles 1..N are the apparatus.
struct SystemState {
    GridPtr grid;
    std::vector<WaveField> apparatus;
    std::optional<WaveField> system;
    double time = 0.0;

    int particle_count() const noexcept {
        return static_cast<int>(apparatus.size()) + (system ? 1 : 0);
    }
    /// i = 0 is the system, i = 1..N the apparatus. Throws std::out_of_range.
    const WaveField& particle(int i) const;
    WaveField& particle(int i);
};

/// Fields entering the mean-field sum and the normalisation M they are divided by.
struct MeanfieldLayout {
    bool system_participates = false;
    double divisor = 1.0;
};

MeanfieldLayout meanfield_layout(const SystemState& state, const ModelParams& p);

/// V0(theta) = cos^2(theta); zeros when `potential_on` is false.
std::vector<double> background_potential(const Grid& g, const ModelParams& p);

/// phi^2 = (1/M) sum_k |psi_k|^2.
///
/// With `for_readout` the sum covers the apparatus only and M = N, which is the
/// meter's order variable. Otherwise the system joins the sum when it takes part
/// in the mean field, and M follows `meanfield_norm`.
std::vector<double> order_variable(const SystemState& state, const ModelParams& p, bool for_readout);

/// lambda * (phi^2 - |psi_i|^2 / M): the mean field felt by particle i without its self-term.
std::vector<double> hartree_potential(int i, const SystemState& state, const ModelParams& p);

/// Kinetic + external + pairwise Hartree energy (self-interaction excluded).
double total_energy(const SystemState& state, const ModelParams& p);

/// B = integral of sign(theta) * phi^2, in [-1, 1].
double readout_sign(std::span<const double> phi2, const Grid& g);

/// Mass of `rho` on theta > 0 (the theta = 0 sample counts half).
double positive_mass(std::span<const double> rho, const Grid& g);

}  // namespace qring

namespace qring {

/// Views of every field in particle order (system first when present and requested).
std::vector<std::span<const cplx>> field_views(const SystemState& state, bool with_system);
std::vector<std::span<cplx>> mutable_field_views(SystemState& state, bool with_system);

}  // namespace qring
