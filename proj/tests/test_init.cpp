#include "helpers.hpp"

#include "qring/error.hpp"
#include "qring/init.hpp"

#include <doctest.h>

#include <cstring>
#include <numeric>

using namespace qring;
using qring::test::kPi;

TEST_CASE("zero spread gives identical packets at the hilltop") {
    ModelParams p;
    p.sigma = 0.0;
    p.n_apparatus = 5;
    auto g = make_grid(128);
    auto [fields, draw] = sample_apparatus_initial(p, 42, g);
    REQUIRE(fields.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(draw.xi[i] == 0.0);
        CHECK(draw.xi_prime[i] == 0.0);
        CHECK(test::l2_distance(fields[i], fields[0]) == 0.0);
    }
    // centred at zero, real and even
    const auto rho = fields[0].density();
    CHECK(readout_sign(rho, *g) == doctest::Approx(0.0).scale(1.0));
    for (const auto& a : fields[0].amplitudes) CHECK(a.imag() == 0.0);
}

TEST_CASE("draws are reproducible and seed-dependent") {
    ModelParams p;
    auto g = make_grid(64);
    auto [a, da] = sample_apparatus_initial(p, 9, g);
    auto [b, db] = sample_apparatus_initial(p, 9, g);
    auto [c, dc] = sample_apparatus_initial(p, 10, g);
    CHECK(da.xi == db.xi);
    CHECK(da.xi_prime == db.xi_prime);
    CHECK(da.xi != dc.xi);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::memcmp(a[i].amplitudes.data(), b[i].amplitudes.data(), 64 * sizeof(cplx)) == 0);
        CHECK(a[i].norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(derive_trial_seed(1, 0) == derive_trial_seed(1, 0));
    CHECK(derive_trial_seed(1, 0) != derive_trial_seed(1, 1));
    CHECK(derive_trial_seed(1, 0) != derive_trial_seed(2, 0));
}

TEST_CASE("sampling statistics over many seeds") {
    ModelParams p;  // sigma 0.1, N 100
    int good = 0;
    const int seeds = 300;
    for (int s = 0; s < seeds; ++s) {
        const auto d = draw_apparatus(p, derive_trial_seed(123, s));
        const double mean = std::accumulate(d.xi.begin(), d.xi.end(), 0.0) / d.xi.size();
        double var = 0.0;
        for (double x : d.xi) var += (x - mean) * (x - mean);
        const double sd = std::sqrt(var / (d.xi.size() - 1));
        if (std::abs(mean) <= 0.04 && sd >= 0.07 && sd <= 0.13) ++good;
        for (double x : d.xi) CHECK(std::abs(x) <= kCentreRejectBound);
    }
    CHECK(good >= 0.99 * seeds);
}

TEST_CASE("packet centres and momenta follow the draw") {
    ModelParams p;
    p.n_apparatus = 3;
    auto g = make_grid(512);
    auto [fields, draw] = sample_apparatus_initial(p, 5, g);
    const auto x = g->points();
    for (int i = 0; i < 3; ++i) {
        const auto rho = fields[i].density();
        double centre = 0.0;
        for (int j = 0; j < g->size(); ++j) centre += x[j] * rho[j];
        centre *= g->spacing();
        CHECK(centre == doctest::Approx(draw.xi[i]).epsilon(1e-9).scale(1e-9));
        // <p> / hbar-free wavenumber: Im(conj(f) f') integrates to xi'
        const auto d = first_derivative(fields[i]);
        double k = 0.0;
        for (int j = 0; j < g->size(); ++j) k += std::imag(std::conj(fields[i].amplitudes[j]) * d[j]);
        CHECK(k * g->spacing() == doctest::Approx(draw.xi_prime[i]).epsilon(1e-9).scale(1e-9));
    }
}

TEST_CASE("system initial state") {
    auto g = make_grid(512);
    TriggerParams t;
    const auto x = g->points();
    auto peak = [&](const WaveField& f) {
        const auto rho = f.density();
        return x[std::max_element(rho.begin(), rho.end()) - rho.begin()];
    };

    t.alpha = 0.0;
    CHECK(peak(system_initial(t, g)) == doctest::Approx(0.5).epsilon(g->spacing()));
    t.alpha = kPi / 2;
    CHECK(peak(system_initial(t, g)) == doctest::Approx(-0.5).epsilon(g->spacing()));

    t.alpha = kPi / 4;
    const auto rho = system_initial(t, g).density();
    // theta_j and -theta_j pair up as j <-> n - j
    for (int j = 1; j < g->size(); ++j) CHECK(std::abs(rho[j] - rho[g->size() - j]) < 1e-12);
}

TEST_CASE("negative-side mass of the system against the overlap formula") {
    auto g = make_grid(1024);
    TriggerParams t;
    const double d = t.delta_theta;
    // |G(theta -+ 1/2)|^2 are normals with sd d / sqrt 2; the cross term is even.
    const double tail = 0.5 * std::erfc(0.5 / (d / std::sqrt(2.0)) / std::sqrt(2.0));
    const double cross = std::exp(-1.0 / (4 * d * d));
    for (double alpha : {0.0, 0.3, kPi / 4, 1.2, kPi / 2}) {
        t.alpha = alpha;
        const double s = std::sin(alpha), c = std::cos(alpha);
        const double expect = (s * s * (1 - tail) + c * c * tail + s * c * cross) / (1 + 2 * s * c * cross);
        const auto rho = system_initial(t, g).density();
        // the half-ring sum is a trapezoid rule with an O(h^2) end correction at theta = 0
        CHECK(std::abs(1.0 - positive_mass(rho, *g) - expect) < 2e-5);
    }
}

TEST_CASE("trigger validation") {
    TriggerParams t;
    t.alpha = -0.1;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    t.alpha = 2.0;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    t.alpha = kPi / 2;
    CHECK_NOTHROW(t.validate());
}
