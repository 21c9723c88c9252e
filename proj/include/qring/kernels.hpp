#pragma once

// Per-step data-parallel kernels of the split-step integrator.
//
// Every kernel exists twice: `parallel::` (OpenMP) and `serial::` (plain
// loops kept as the reference). Both perform the same floating-point
// operations in the same order for every output element, so their results
// are bit-identical for any thread count.

#include "qring/grid.hpp"

#include <span>
#include <vector>

namespace qring::kernels {

using ConstFieldRef = std::span<const cplx>;
using FieldRef = std::span<cplx>;

enum class Backend { Serial, Parallel };

namespace serial {
/// out[j] = sum_i |fields[i][j]|^2, accumulated in index order i = 0, 1, ...
void accumulate_density(std::span<const ConstFieldRef> fields, std::span<double> out);
/// fields[i][j] *= exp(-i (common[j] - self_weight[i] |fields[i][j]|^2) tau)
void apply_potential_phase(std::span<const FieldRef> fields, std::span<const double> common,
                           std::span<const double> self_weight, double tau);
/// fields[i] <- IFFT(factors * FFT(fields[i])); `factors` carries the 1/n.
void apply_spectral(std::span<const FieldRef> fields, std::span<const cplx> factors,
                    const SpectralTransform& transform);
/// out[i] = sum_k k^2 |FFT(fields[i])_k|^2 / n
void spectral_gradient_sq(std::span<const ConstFieldRef> fields, std::span<const int> k,
                          const SpectralTransform& transform, std::span<double> out);
}  // namespace serial

namespace parallel {
void accumulate_density(std::span<const ConstFieldRef> fields, std::span<double> out);
void apply_potential_phase(std::span<const FieldRef> fields, std::span<const double> common,
                           std::span<const double> self_weight, double tau);
void apply_spectral(std::span<const FieldRef> fields, std::span<const cplx> factors,
                    const SpectralTransform& transform);
void spectral_gradient_sq(std::span<const ConstFieldRef> fields, std::span<const int> k,
                          const SpectralTransform& transform, std::span<double> out);
}  // namespace parallel

/// Backend dispatch used by the model and integrator.
struct Kernels {
    Backend backend = Backend::Parallel;

    void accumulate_density(std::span<const ConstFieldRef> fields, std::span<double> out) const;
    void apply_potential_phase(std::span<const FieldRef> fields, std::span<const double> common,
                               std::span<const double> self_weight, double tau) const;
    void apply_spectral(std::span<const FieldRef> fields, std::span<const cplx> factors,
                        const SpectralTransform& transform) const;
    void spectral_gradient_sq(std::span<const ConstFieldRef> fields, std::span<const int> k,
                              const SpectralTransform& transform, std::span<double> out) const;
};

}  // namespace qring::kernels
