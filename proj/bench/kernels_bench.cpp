#include "qring/init.hpp"
#include "qring/integrator.hpp"
#include "qring/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace qring;
using namespace qring::kernels;

namespace {

struct Fixture {
    GridPtr grid;
    std::vector<FieldVector> fields;
    std::vector<double> common, weights, out;
    std::vector<cplx> factors;

    Fixture(int n, int count) : grid(make_grid(n)), fields(count, FieldVector(n)), common(n), weights(count), out(n), factors(n) {
        std::mt19937_64 rng(1);
        std::normal_distribution<double> nd;
        for (auto& f : fields)
            for (auto& v : f) v = {nd(rng) * 0.1, nd(rng) * 0.1};
        for (int j = 0; j < n; ++j) {
            common[j] = std::cos(j * 0.01);
            factors[j] = std::polar(1.0 / n, -1e-3 * j * j);
        }
        for (auto& w : weights) w = -0.005;
    }
    std::vector<FieldRef> refs() { return {fields.begin(), fields.end()}; }
    std::vector<ConstFieldRef> crefs() const { return {fields.begin(), fields.end()}; }
};

template <Backend B>
void density(benchmark::State& st) {
    Fixture fx(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const Kernels k{B};
    for (auto _ : st) {
        k.accumulate_density(fx.crefs(), fx.out);
        benchmark::DoNotOptimize(fx.out.data());
    }
}

template <Backend B>
void phase(benchmark::State& st) {
    Fixture fx(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const Kernels k{B};
    for (auto _ : st) {
        k.apply_potential_phase(fx.refs(), fx.common, fx.weights, 1e-5);
        benchmark::ClobberMemory();
    }
}

template <Backend B>
void spectral(benchmark::State& st) {
    Fixture fx(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const Kernels k{B};
    for (auto _ : st) {
        k.apply_spectral(fx.refs(), fx.factors, fx.grid->transform());
        benchmark::ClobberMemory();
    }
}

template <Backend B>
void full_step(benchmark::State& st) {
    ModelParams p;
    p.n_apparatus = static_cast<int>(st.range(1));
    SystemState s;
    s.grid = make_grid(static_cast<int>(st.range(0)));
    s.apparatus = sample_apparatus_initial(p, 1, s.grid).first;
    s.system = system_initial({}, s.grid);
    SplitStepper stepper(s.grid, p, 5e-4, B);
    std::int64_t done = 0;
    for (auto _ : st) {
        stepper.advance(s, 10, done);
        done += 10;
    }
    st.SetItemsProcessed(st.iterations() * 10);
}

}  // namespace

#define QRING_BENCH(fn)                                                                   \
    BENCHMARK(fn<Backend::Serial>)->Args({512, 101})->Args({256, 41})->Unit(benchmark::kMicrosecond); \
    BENCHMARK(fn<Backend::Parallel>)->Args({512, 101})->Args({256, 41})->Unit(benchmark::kMicrosecond)

QRING_BENCH(density);
QRING_BENCH(phase);
QRING_BENCH(spectral);
QRING_BENCH(full_step);

BENCHMARK_MAIN();
