#include "helpers.hpp"
#include "oracle/crank_nicolson.hpp"

#include "qring/error.hpp"
#include "qring/init.hpp"
#include "qring/integrator.hpp"

#include <doctest.h>

#include <cstring>

using namespace qring;
using qring::test::kPi;

namespace {

SystemState random_state(int n, int count, std::uint64_t seed, bool with_system = false) {
    ModelParams p;
    p.n_apparatus = count;
    auto g = make_grid(n);
    SystemState s;
    s.grid = g;
    s.apparatus = sample_apparatus_initial(p, seed, g).first;
    if (with_system) s.system = system_initial(TriggerParams{.alpha = 0.4}, g);
    return s;
}

EvolveConfig quiet(double dt, double t_final) {
    EvolveConfig c;
    c.dt = dt;
    c.t_final = t_final;
    c.snapshot_every = 0;
    c.diagnostics_every = 0;
    c.max_tightenings = 0;
    return c;
}

bool fields_identical(const SystemState& a, const SystemState& b) {
    for (int i = a.system ? 0 : 1; i <= static_cast<int>(a.apparatus.size()); ++i) {
        const auto& x = a.particle(i).amplitudes;
        const auto& y = b.particle(i).amplitudes;
        if (std::memcmp(x.data(), y.data(), x.size() * sizeof(cplx)) != 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("free plane wave picks up the analytic phase") {
    auto g = make_grid(64);
    ModelParams p;
    p.lambda = 0.0;
    p.potential_on = false;
    SystemState s;
    s.grid = g;
    s.apparatus = {test::plane_wave(g, 1)};
    const WaveField start = s.apparatus[0];
    evolve(s, p, quiet(5e-4, 1.0));
    CHECK(s.time == doctest::Approx(1.0));
    const cplx phase = std::polar(1.0, -0.01);
    for (int j = 0; j < 64; ++j) {
        CHECK(std::abs(s.apparatus[0].amplitudes[j] - phase * start.amplitudes[j]) < 1e-9);
        CHECK(std::abs(std::norm(s.apparatus[0].amplitudes[j]) - std::norm(start.amplitudes[j])) < 1e-9);
    }
}

TEST_CASE("norms are conserved by every step") {
    auto s = random_state(128, 6, 3, true);
    ModelParams p;
    p.n_apparatus = 6;
    for (int k = 0; k < 20; ++k) {
        step(s, p, 1e-3);
        for (int i = 0; i < s.particle_count(); ++i) CHECK(std::abs(s.particle(i).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("zero horizon leaves the state untouched") {
    auto s = random_state(64, 3, 1);
    const auto before = s;
    const auto log = evolve(s, ModelParams{}, quiet(1e-3, 0.0));
    CHECK(log.samples.empty());
    CHECK(fields_identical(s, before));
}

TEST_CASE("serial and parallel backends give identical trajectories") {
    auto a = random_state(128, 9, 4, true);
    auto b = a;
    ModelParams p;
    evolve(a, p, quiet(1e-3, 0.1), {}, kernels::Backend::Serial);
    evolve(b, p, quiet(1e-3, 0.1), {}, kernels::Backend::Parallel);
    CHECK(fields_identical(a, b));
}

TEST_CASE("mirror symmetry is preserved") {
    // theta -> -theta maps sample j to n - j (j = 0 stays: it is theta = -pi = pi)
    auto s = random_state(128, 4, 8);
    auto m = s;
    const int n = 128;
    for (auto& f : m.apparatus) {
        auto a = f.amplitudes;
        for (int j = 0; j < n; ++j) f.amplitudes[j] = a[(n - j) % n];
    }
    ModelParams p;
    evolve(s, p, quiet(1e-3, 0.2));
    evolve(m, p, quiet(1e-3, 0.2));
    for (std::size_t i = 0; i < s.apparatus.size(); ++i)
        for (int j = 0; j < n; ++j)
            CHECK(std::abs(m.apparatus[i].amplitudes[j] - s.apparatus[i].amplitudes[(n - j) % n]) < 1e-12);
}

TEST_CASE("relabelling apparatus particles commutes with evolution") {
    auto s = random_state(64, 5, 2);
    auto r = s;
    std::reverse(r.apparatus.begin(), r.apparatus.end());
    ModelParams p;
    evolve(s, p, quiet(1e-3, 0.2));
    evolve(r, p, quiet(1e-3, 0.2));
    for (int i = 0; i < 5; ++i) CHECK(test::l2_distance(s.apparatus[i], r.apparatus[4 - i]) < 1e-12);
}

TEST_CASE("second-order convergence in dt") {
    ModelParams p;
    p.n_apparatus = 4;
    const auto s0 = random_state(128, 4, 6);
    auto run = [&](double dt) {
        auto s = s0;
        evolve(s, p, quiet(dt, 0.5));
        return s;
    };
    const auto ref = run(2.5e-4);
    const double e1 = test::state_distance(run(4e-3), ref);
    const double e2 = test::state_distance(run(2e-3), ref);
    MESSAGE("errors " << e1 << " " << e2);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("agrees with the Crank-Nicolson oracle") {
    const int n = 64;
    ModelParams p;
    p.n_apparatus = 2;
    auto s = random_state(n, 2, 17);
    std::vector<oracle::Field> init;
    for (const auto& f : s.apparatus) init.emplace_back(f.amplitudes.begin(), f.amplitudes.end());

    // short horizon keeps the dense solves cheap; the acceptance suite runs to t = 1
    oracle::CrankNicolsonParams cn;
    cn.lambda = p.lambda;
    cn.dt = 5e-4;
    cn.t_final = 0.2;
    const auto expect = oracle::propagate_extrapolated(init, cn);

    evolve(s, p, quiet(1.25e-5, 0.2));
    double d2 = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < n; ++j) d2 += std::norm(s.apparatus[i].amplitudes[j] - expect[i][j]);
    const double dist = std::sqrt(d2 * s.grid->spacing());
    MESSAGE("L2 distance " << dist);
    CHECK(dist <= 1e-6);
}

TEST_CASE("harmonic well keeps a packet at the valley floor") {
    auto g = make_grid(256);
    ModelParams p;
    p.lambda = 0.0;
    p.n_apparatus = 1;
    SystemState s;
    s.grid = g;
    s.apparatus = {test::gaussian(g, kPi / 2, 0.005)};
    EvolveConfig c = quiet(1e-3, 5.0);
    c.snapshot_every = 250;
    double worst = 0.0;
    evolve(s, p, c, [&](const Snapshot& snap) {
        double centre = 0.0;
        const auto x = g->points();
        for (int j = 0; j < 256; ++j) centre += x[j] * snap.order_variable[j];
        worst = std::max(worst, std::abs(centre * g->spacing() - kPi / 2));
    });
    CHECK(worst < 1e-8);
}

TEST_CASE("energy drift stays inside the budget") {
    auto s = random_state(256, 10, 12);
    ModelParams p;
    p.n_apparatus = 10;
    EvolveConfig c = quiet(5e-4, 2.0);
    c.diagnostics_every = 400;
    const auto log = evolve(s, p, c);
    CHECK(log.samples.size() == 11);
    CHECK(log.max_energy_drift() < 1e-3);
    CHECK(log.max_norm_drift() < 1e-12);
}

TEST_CASE("snapshot cadence and contents") {
    auto s = random_state(64, 3, 2, true);
    EvolveConfig c = quiet(1e-3, 0.1);
    c.snapshot_every = 30;
    std::vector<double> times;
    evolve(s, ModelParams{}, c, [&](const Snapshot& snap) {
        times.push_back(snap.time);
        CHECK(snap.order_variable.size() == 64);
        CHECK(snap.system_density.size() == 64);
    });
    REQUIRE(times.size() == 5);
    CHECK(times.front() == 0.0);
    CHECK(times[1] == doctest::Approx(0.03));
    CHECK(times.back() == doctest::Approx(0.1));
}

TEST_CASE("drift budget triggers dt tightening") {
    auto s = random_state(64, 4, 3);
    EvolveConfig c = quiet(2e-2, 1.0);
    c.diagnostics_every = 5;
    c.energy_budget = 1e-9;
    c.max_tightenings = 2;
    const auto log = evolve(s, ModelParams{}, c);
    CHECK(log.tightenings == 2);
    CHECK(log.dt_used == doctest::Approx(5e-3));
    CHECK(log.samples.back().time == doctest::Approx(1.0));
    // diagnostics stay on the same time grid after halving
    CHECK(log.samples[1].time == doctest::Approx(0.1));
}

TEST_CASE("non-finite fields raise a blow-up error") {
    auto s = random_state(64, 3, 3);
    s.apparatus[1].amplitudes[5] = cplx(std::nan(""), 0.0);
    EvolveConfig c = quiet(1e-3, 0.01);
    CHECK_THROWS_AS(evolve(s, ModelParams{}, c), NumericalBlowUp);
}

TEST_CASE("evolve configuration validation") {
    EvolveConfig c;
    c.dt = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.t_final = 1.00007;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    CHECK(c.step_count() == 48000);
}
