#include "qring/grid.hpp"

#include "qring/error.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace qring {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

SpectralTransform::SpectralTransform(int n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    // ESTIMATE keeps the chosen algorithm (and so every output bit) independent of timing.
    auto* scratch = fftw_alloc_complex(static_cast<size_t>(n));
    forward_plan_ = fftw_plan_dft_1d(n, scratch, scratch, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_plan_ = fftw_plan_dft_1d(n, scratch, scratch, FFTW_BACKWARD, FFTW_ESTIMATE);
    const unsigned loose = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_unaligned_ = fftw_plan_dft_1d(n, scratch, scratch, FFTW_FORWARD, loose);
    backward_unaligned_ = fftw_plan_dft_1d(n, scratch, scratch, FFTW_BACKWARD, loose);
    fftw_free(scratch);
}

SpectralTransform::~SpectralTransform() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(forward_unaligned_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_unaligned_));
}

void SpectralTransform::execute(bool forward, std::span<cplx> data) const {
    if (static_cast<int>(data.size()) != n_) throw GridError("transform length mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    const bool aligned = fftw_alignment_of(reinterpret_cast<double*>(p)) == 0;
    void* plan = aligned ? (forward ? forward_plan_ : backward_plan_)
                         : (forward ? forward_unaligned_ : backward_unaligned_);
    fftw_execute_dft(static_cast<fftw_plan>(plan), p, p);
}

void SpectralTransform::forward(std::span<cplx> data) const { execute(true, data); }

void SpectralTransform::backward(std::span<cplx> data) const { execute(false, data); }

Grid::Grid(int n_points)
    : n_points_(n_points),
      spacing_(2.0 * std::numbers::pi / n_points),
      points_(n_points),
      wavenumbers_(n_points) {
    for (int j = 0; j < n_points; ++j) {
        points_[j] = -std::numbers::pi + j * spacing_;
        wavenumbers_[j] = j <= n_points / 2 ? j : j - n_points;
    }
    transform_ = std::make_unique<SpectralTransform>(n_points);
}

Grid::~Grid() = default;

GridPtr make_grid(int n_points) {
    if (n_points < 8 || n_points % 2 != 0) {
        throw GridError("unsupported grid size");
    }
    return std::make_shared<const Grid>(n_points);
}

std::vector<double> WaveField::density() const {
    std::vector<double> rho(amplitudes.size());
    for (size_t j = 0; j < amplitudes.size(); ++j) {
        rho[j] = std::norm(amplitudes[j]);
    }
    return rho;
}

double WaveField::norm() const {
    return std::sqrt(integrate(density(), *grid));
}

namespace {

template <typename Multiplier>
std::vector<cplx> spectral_apply(const WaveField& f, Multiplier&& mult) {
    const Grid& g = *f.grid;
    FieldVector work = f.amplitudes;
    g.transform().forward(work);
    const auto k = g.wavenumbers();
    const double inv_n = 1.0 / g.size();
    for (int j = 0; j < g.size(); ++j) {
        work[j] *= mult(k[j], g.size()) * inv_n;
    }
    g.transform().backward(work);
    return {work.begin(), work.end()};
}

}  // namespace

std::vector<cplx> second_derivative(const WaveField& f) {
    return spectral_apply(f, [](int k, int) { return cplx(-double(k) * k, 0.0); });
}

std::vector<cplx> first_derivative(const WaveField& f) {
    return spectral_apply(f, [](int k, int n) {
        return 2 * k == n ? cplx(0.0) : cplx(0.0, double(k));
    });
}

double integrate(std::span<const double> values, const Grid& g) {
    if (static_cast<int>(values.size()) != g.size()) {
        throw GridError("length mismatch: " + std::to_string(values.size()) + " values on a " +
                        std::to_string(g.size()) + "-point grid");
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    return g.spacing() * sum;
}

WaveField normalize(const WaveField& f) {
    const double n = f.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw DegenerateField();
    }
    WaveField out = f;
    for (auto& a : out.amplitudes) a /= n;
    return out;
}

}  // namespace qring
