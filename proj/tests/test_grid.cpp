#include "helpers.hpp"

#include "qring/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace qring;
using qring::test::kPi;

TEST_CASE("grid of 8 points") {
    auto g = make_grid(8);
    CHECK(g->spacing() == doctest::Approx(kPi / 4).epsilon(1e-15));
    const auto x = g->points();
    REQUIRE(x.size() == 8);
    for (int j = 0; j < 8; ++j) CHECK(x[j] == doctest::Approx(-kPi + j * kPi / 4).epsilon(1e-15));
    CHECK(x.back() == doctest::Approx(3 * kPi / 4));

    std::vector<int> k(g->wavenumbers().begin(), g->wavenumbers().end());
    CHECK(k == std::vector<int>{0, 1, 2, 3, 4, -3, -2, -1});
}

TEST_CASE("unsupported grid sizes") {
    CHECK_THROWS_WITH_AS(make_grid(7), "unsupported grid size", GridError);
    CHECK_THROWS_AS(make_grid(6), GridError);
    CHECK_THROWS_AS(make_grid(0), GridError);
}

TEST_CASE("second derivative of Fourier modes") {
    auto g = make_grid(64);
    for (int k : {0, 1, 3, -5}) {
        const WaveField f = test::plane_wave(g, k);
        const auto d2 = second_derivative(f);
        for (int j = 0; j < g->size(); ++j) {
            CHECK(std::abs(d2[j] + double(k * k) * f.amplitudes[j]) < 1e-10);
        }
    }
}

TEST_CASE("first derivative of a Fourier mode") {
    auto g = make_grid(32);
    const WaveField f = test::plane_wave(g, 2);
    const auto d = first_derivative(f);
    for (int j = 0; j < g->size(); ++j) CHECK(std::abs(d[j] - cplx(0, 2) * f.amplitudes[j]) < 1e-12);
}

TEST_CASE("integration examples") {
    for (int n : {8, 64, 256}) {
        auto g = make_grid(n);
        const auto rho = test::plane_wave(g, 1).density();
        CHECK(integrate(rho, *g) == doctest::Approx(1.0).epsilon(1e-12));
        std::vector<double> zeros(n, 0.0);
        CHECK(integrate(zeros, *g) == 0.0);
    }
    auto g = make_grid(256);
    std::vector<double> c2(256);
    std::ranges::transform(g->points(), c2.begin(), [](double t) { return std::cos(t) * std::cos(t); });
    CHECK(std::abs(integrate(c2, *g) - kPi) < 1e-10);
    std::vector<double> wrong(10);
    CHECK_THROWS_AS(integrate(wrong, *g), GridError);
}

TEST_CASE("normalize") {
    auto g = make_grid(64);
    WaveField f = test::gaussian(g, 0.3, 0.1);
    WaveField doubled = f;
    for (auto& a : doubled.amplitudes) a *= 2.0;
    CHECK(doubled.norm() == doctest::Approx(2.0));
    const WaveField back = normalize(doubled);
    CHECK(back.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(test::l2_distance(back, f) < 1e-12);
    CHECK(test::l2_distance(normalize(f), f) < 1e-12);
    CHECK_THROWS_WITH_AS(normalize(WaveField(g)), "degenerate field", DegenerateField);
}

TEST_CASE("transform: Parseval and linearity on random data") {
    auto g = make_grid(128);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    FieldVector a(128), b(128);
    for (int j = 0; j < 128; ++j) {
        a[j] = {nd(rng), nd(rng)};
        b[j] = {nd(rng), nd(rng)};
    }
    double energy = 0.0;
    for (auto v : a) energy += std::norm(v);

    FieldVector fa = a, fb = b, sum(128);
    for (int j = 0; j < 128; ++j) sum[j] = 2.0 * a[j] - b[j];
    g->transform().forward(fa);
    g->transform().forward(fb);
    g->transform().forward(sum);
    double spectral = 0.0;
    for (auto v : fa) spectral += std::norm(v);
    CHECK(spectral / 128 == doctest::Approx(energy).epsilon(1e-12));
    for (int j = 0; j < 128; ++j) CHECK(std::abs(sum[j] - (2.0 * fa[j] - fb[j])) < 1e-11);

    g->transform().backward(fa);
    for (int j = 0; j < 128; ++j) CHECK(std::abs(fa[j] / 128.0 - a[j]) < 1e-13);
}

TEST_CASE("transform accepts unaligned buffers") {
    auto g = make_grid(16);
    std::vector<cplx> buf(17);
    std::span<cplx> view(buf.data() + 1, 16);
    for (int j = 0; j < 16; ++j) view[j] = test::plane_wave(g, 3).amplitudes[j];
    g->transform().forward(view);
    for (int j = 0; j < 16; ++j) {
        // e^{3i(-pi + j h)} carries the sign (-1)^3
        const double expect = j == 3 ? -16.0 / std::sqrt(2 * kPi) : 0.0;
        CHECK(std::abs(view[j] - cplx(expect, 0)) < 1e-12);
    }
}
