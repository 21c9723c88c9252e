#include "qring/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace qring::kernels {

namespace {

constexpr std::ptrdiff_t kDensityBlock = 64;

// Plain product; std::complex's operator* goes through the Annex G inf/nan path.
inline cplx mul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline cplx unit_phase(double angle) {
    return {std::cos(angle), std::sin(angle)};
}

// exp(i x) for the self-interaction correction, which is tiny in practice.
// Taylor terms through x^13 are exact to rounding for |x| <= 0.1; larger
// angles fall back to cos/sin in a second pass.
constexpr double kSmallAngle = 0.1;
constexpr std::size_t kPhaseChunk = 256;

inline void small_phases(const double* x, double* c, double* s, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        const double x2 = x[j] * x[j];
        c[j] = 1.0 + x2 * (-1.0 / 2 + x2 * (1.0 / 24 + x2 * (-1.0 / 720 + x2 * (1.0 / 40320 + x2 * (-1.0 / 3628800 + x2 / 479001600.0)))));
        s[j] = x[j] * (1.0 + x2 * (-1.0 / 6 + x2 * (1.0 / 120 + x2 * (-1.0 / 5040 + x2 * (1.0 / 362880 + x2 * (-1.0 / 39916800 + x2 / 6227020800.0))))));
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(x[j]) > kSmallAngle) {
            c[j] = std::cos(x[j]);
            s[j] = std::sin(x[j]);
        }
    }
}

// f[j] *= exp(-i common[j] tau) * exp(+i weight |f[j]|^2 tau); the first factor is precomputed.
inline void phase_one(FieldRef f, std::span<const cplx> common_phase, double weight, double tau) {
    const std::size_t n = f.size();
    if (weight == 0.0) {
        for (std::size_t j = 0; j < n; ++j) f[j] = mul(f[j], common_phase[j]);
        return;
    }
    const double scale = weight * tau;
    double x[kPhaseChunk], c[kPhaseChunk], s[kPhaseChunk];
    for (std::size_t lo = 0; lo < n; lo += kPhaseChunk) {
        const std::size_t len = std::min(kPhaseChunk, n - lo);
        for (std::size_t j = 0; j < len; ++j) x[j] = scale * std::norm(f[lo + j]);
        small_phases(x, c, s, len);
        for (std::size_t j = 0; j < len; ++j) {
            f[lo + j] = mul(f[lo + j], mul(common_phase[lo + j], cplx(c[j], s[j])));
        }
    }
}

inline void spectral_one(FieldRef f, std::span<const cplx> factors, const SpectralTransform& t) {
    t.forward(f);
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = mul(f[j], factors[j]);
    t.backward(f);
}

inline double gradient_sq_one(ConstFieldRef f, std::span<const int> k, const SpectralTransform& t,
                              FieldVector& scratch) {
    scratch.assign(f.begin(), f.end());
    t.forward(scratch);
    double sum = 0.0;
    for (std::size_t j = 0; j < scratch.size(); ++j) {
        sum += double(k[j]) * k[j] * std::norm(scratch[j]);
    }
    return sum / static_cast<double>(scratch.size());
}

}  // namespace

namespace serial {

void accumulate_density(std::span<const ConstFieldRef> fields, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& f : fields) {
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += std::norm(f[j]);
    }
}

void apply_potential_phase(std::span<const FieldRef> fields, std::span<const double> common,
                           std::span<const double> self_weight, double tau) {
    std::vector<cplx> common_phase(common.size());
    for (std::size_t j = 0; j < common.size(); ++j) common_phase[j] = unit_phase(-common[j] * tau);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        phase_one(fields[i], common_phase, self_weight[i], tau);
    }
}

void apply_spectral(std::span<const FieldRef> fields, std::span<const cplx> factors,
                    const SpectralTransform& transform) {
    for (const auto& f : fields) spectral_one(f, factors, transform);
}

void spectral_gradient_sq(std::span<const ConstFieldRef> fields, std::span<const int> k,
                          const SpectralTransform& transform, std::span<double> out) {
    FieldVector scratch;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        out[i] = gradient_sq_one(fields[i], k, transform, scratch);
    }
}

}  // namespace serial

namespace parallel {

void accumulate_density(std::span<const ConstFieldRef> fields, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(out.size());
    const auto n_blocks = (n + kDensityBlock - 1) / kDensityBlock;
    // Threads split the grid, never the field sum, so each out[j] sees the serial order.
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < n_blocks; ++b) {
        const std::ptrdiff_t lo = b * kDensityBlock;
        const std::ptrdiff_t hi = std::min(n, lo + kDensityBlock);
        for (std::ptrdiff_t j = lo; j < hi; ++j) out[j] = 0.0;
        for (const auto& f : fields) {
            for (std::ptrdiff_t j = lo; j < hi; ++j) out[j] += std::norm(f[j]);
        }
    }
}

void apply_potential_phase(std::span<const FieldRef> fields, std::span<const double> common,
                           std::span<const double> self_weight, double tau) {
    const auto n = static_cast<std::ptrdiff_t>(common.size());
    const auto m = static_cast<std::ptrdiff_t>(fields.size());
    std::vector<cplx> common_phase(common.size());
#pragma omp parallel
    {
#pragma omp for schedule(static)
        for (std::ptrdiff_t j = 0; j < n; ++j) common_phase[j] = unit_phase(-common[j] * tau);
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < m; ++i) {
            phase_one(fields[i], common_phase, self_weight[i], tau);
        }
    }
}

void apply_spectral(std::span<const FieldRef> fields, std::span<const cplx> factors,
                    const SpectralTransform& transform) {
    const auto m = static_cast<std::ptrdiff_t>(fields.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        spectral_one(fields[i], factors, transform);
    }
}

void spectral_gradient_sq(std::span<const ConstFieldRef> fields, std::span<const int> k,
                          const SpectralTransform& transform, std::span<double> out) {
    const auto m = static_cast<std::ptrdiff_t>(fields.size());
#pragma omp parallel
    {
        FieldVector scratch;
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < m; ++i) {
            out[i] = gradient_sq_one(fields[i], k, transform, scratch);
        }
    }
}

}  // namespace parallel

void Kernels::accumulate_density(std::span<const ConstFieldRef> fields, std::span<double> out) const {
    if (backend == Backend::Parallel) {
        parallel::accumulate_density(fields, out);
    } else {
        serial::accumulate_density(fields, out);
    }
}

void Kernels::apply_potential_phase(std::span<const FieldRef> fields, std::span<const double> common,
                                    std::span<const double> self_weight, double tau) const {
    if (backend == Backend::Parallel) {
        parallel::apply_potential_phase(fields, common, self_weight, tau);
    } else {
        serial::apply_potential_phase(fields, common, self_weight, tau);
    }
}

void Kernels::apply_spectral(std::span<const FieldRef> fields, std::span<const cplx> factors,
                             const SpectralTransform& transform) const {
    if (backend == Backend::Parallel) {
        parallel::apply_spectral(fields, factors, transform);
    } else {
        serial::apply_spectral(fields, factors, transform);
    }
}

void Kernels::spectral_gradient_sq(std::span<const ConstFieldRef> fields, std::span<const int> k,
                                   const SpectralTransform& transform, std::span<double> out) const {
    if (backend == Backend::Parallel) {
        parallel::spectral_gradient_sq(fields, k, transform, out);
    } else {
        serial::spectral_gradient_sq(fields, k, transform, out);
    }
}

}  // namespace qring::kernels
