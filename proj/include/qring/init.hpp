#pragma once

#include "qring/grid.hpp"
#include "qring/model.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace qring {

struct TriggerParams {
    double alpha = 0.0;                        ///< superposition angle in [0, pi/2]
    double delta_theta = 0.31622776601683794;  ///< sqrt(0.1), matches the apparatus width
    double p0 = 0.0;

    void validate() const;
};

/// The random packet centres and momenta of one apparatus preparation.
struct RandomDraw {
    std::uint64_t seed = 0;
    std::vector<double> xi;
    std::vector<double> xi_prime;
    int rejected = 0;  ///< centres redrawn because |xi| exceeded the rejection bound
};

/// Packet centres beyond this magnitude are redrawn.
inline constexpr double kCentreRejectBound = 0.7853981633974483;  // pi/4

/// Seed of the independent stream for one trial of a sweep.
std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial_index);

/// Draws xi, xi' ~ N(0, sigma^2) for every apparatus particle from `seed`.
RandomDraw draw_apparatus(const ModelParams& p, std::uint64_t seed);

/// Unit-norm Gaussian packets exp(-(theta - xi)^2 / 2 s^2) exp(i xi' theta).
std::vector<WaveField> apparatus_fields(const ModelParams& p, const RandomDraw& draw, const GridPtr& grid);

std::pair<std::vector<WaveField>, RandomDraw> sample_apparatus_initial(const ModelParams& p,
                                                                       std::uint64_t seed,
                                                                       const GridPtr& grid);

/// sin(a) G(theta + 1/2) e^{+i p0 theta} + cos(a) G(theta - 1/2) e^{-i p0 theta}, normalised.
WaveField system_initial(const TriggerParams& t, const GridPtr& grid);

}  // namespace qring
