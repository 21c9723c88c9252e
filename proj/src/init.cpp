#include "qring/init.hpp"

#include "qring/error.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <random>

namespace qring {

void TriggerParams::validate() const {
    if (!(alpha >= 0.0 && alpha <= std::numbers::pi / 2 + 1e-12)) {
        throw ConfigError("trigger.alpha must lie in [0, pi/2]");
    }
    if (!(delta_theta > 0.0)) throw ConfigError("trigger.delta_theta must be > 0");
    if (!std::isfinite(p0)) throw ConfigError("trigger.p0 must be finite");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(trial_index + 0x51ed27a3ULL));
}

RandomDraw draw_apparatus(const ModelParams& p, std::uint64_t seed) {
    RandomDraw draw;
    draw.seed = seed;
    const auto n = static_cast<std::size_t>(p.n_apparatus);
    draw.xi.resize(n, 0.0);
    draw.xi_prime.resize(n, 0.0);
    if (p.sigma == 0.0) return draw;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, p.sigma);
    for (auto& x : draw.xi) {
        x = gauss(rng);
        while (std::abs(x) > kCentreRejectBound) {
            ++draw.rejected;
            x = gauss(rng);
        }
    }
    for (auto& x : draw.xi_prime) x = gauss(rng);
    if (draw.rejected > 0) {
        std::clog << "qring: redrew " << draw.rejected << " packet centre(s) beyond pi/4 (seed "
                  << seed << ")\n";
    }
    return draw;
}

std::vector<WaveField> apparatus_fields(const ModelParams& p, const RandomDraw& draw, const GridPtr& grid) {
    const auto theta = grid->points();
    std::vector<WaveField> fields;
    fields.reserve(draw.xi.size());
    for (std::size_t i = 0; i < draw.xi.size(); ++i) {
        WaveField f(grid);
        for (int j = 0; j < grid->size(); ++j) {
            const double d = theta[j] - draw.xi[i];
            f.amplitudes[j] = std::exp(-d * d / (2.0 * p.s2)) * std::polar(1.0, draw.xi_prime[i] * theta[j]);
        }
        fields.push_back(normalize(f));
    }
    return fields;
}

std::pair<std::vector<WaveField>, RandomDraw> sample_apparatus_initial(const ModelParams& p,
                                                                       std::uint64_t seed,
                                                                       const GridPtr& grid) {
    RandomDraw draw = draw_apparatus(p, seed);
    auto fields = apparatus_fields(p, draw, grid);
    return {std::move(fields), std::move(draw)};
}

WaveField system_initial(const TriggerParams& t, const GridPtr& grid) {
    const auto theta = grid->points();
    const double w = 2.0 * t.delta_theta * t.delta_theta;
    const double a_left = std::sin(t.alpha);
    const double a_right = std::cos(t.alpha);
    WaveField f(grid);
    for (int j = 0; j < grid->size(); ++j) {
        const double dl = theta[j] + 0.5;
        const double dr = theta[j] - 0.5;
        f.amplitudes[j] = a_left * std::exp(-dl * dl / w) * std::polar(1.0, t.p0 * theta[j]) +
                          a_right * std::exp(-dr * dr / w) * std::polar(1.0, -t.p0 * theta[j]);
    }
    return normalize(f);
}

}  // namespace qring
