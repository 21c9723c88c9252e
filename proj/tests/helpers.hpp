#pragma once

#include "qring/grid.hpp"
#include "qring/model.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace qring::test {

inline constexpr double kPi = std::numbers::pi;

inline WaveField plane_wave(const GridPtr& g, int k) {
    WaveField f(g);
    const auto x = g->points();
    for (int j = 0; j < g->size(); ++j) f.amplitudes[j] = std::polar(1.0 / std::sqrt(2.0 * kPi), k * x[j]);
    return f;
}

inline WaveField gaussian(const GridPtr& g, double centre, double s2, double momentum = 0.0) {
    WaveField f(g);
    const auto x = g->points();
    for (int j = 0; j < g->size(); ++j) {
        double d = std::remainder(x[j] - centre, 2.0 * kPi);
        f.amplitudes[j] = std::polar(std::exp(-d * d / (4.0 * s2)), momentum * x[j]);
    }
    return normalize(f);
}

inline double l2_distance(const WaveField& a, const WaveField& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.amplitudes.size(); ++j) s += std::norm(a.amplitudes[j] - b.amplitudes[j]);
    return std::sqrt(s * a.grid->spacing());
}

inline double state_distance(const SystemState& a, const SystemState& b) {
    double s = 0.0;
    for (int i = a.system ? 0 : 1; i <= static_cast<int>(a.apparatus.size()); ++i) {
        const double d = l2_distance(a.particle(i), b.particle(i));
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace qring::test
