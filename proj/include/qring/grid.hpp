#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <new>
#include <span>
#include <vector>

namespace qring {

using cplx = std::complex<double>;

/// 64-byte aligned storage so FFTW can use its SIMD codelets on field data.
template <typename T>
struct AlignedAllocator {
    using value_type = T;
    static constexpr std::align_val_t alignment{64};

    AlignedAllocator() noexcept = default;
    template <typename U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), alignment)); }
    void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, alignment); }

    template <typename U>
    bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using FieldVector = std::vector<cplx, AlignedAllocator<cplx>>;

class SpectralTransform;

/// Uniform periodic grid on the ring, theta in [-pi, pi).
///
/// Immutable after construction and shared between fields through
/// `std::shared_ptr<const Grid>`. Owns the FFT plans for its size; executing
/// them is thread-safe.
class Grid {
public:
    explicit Grid(int n_points);
    ~Grid();

    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    int size() const noexcept { return n_points_; }
    double spacing() const noexcept { return spacing_; }
    std::span<const double> points() const noexcept { return points_; }
    /// DFT ordering 0, 1, ..., n/2-1, n/2, -(n/2-1), ..., -1 (Nyquist stored as +n/2).
    std::span<const int> wavenumbers() const noexcept { return wavenumbers_; }

    const SpectralTransform& transform() const noexcept { return *transform_; }

private:
    int n_points_;
    double spacing_;
    std::vector<double> points_;
    std::vector<int> wavenumbers_;
    std::unique_ptr<SpectralTransform> transform_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Throws GridError("unsupported grid size") for n_points < 8 or odd.
GridPtr make_grid(int n_points);

/// In-place unnormalized complex DFT of one grid-length array (FFTW backed).
class SpectralTransform {
public:
    explicit SpectralTransform(int n);
    ~SpectralTransform();

    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    void forward(std::span<cplx> data) const;
    /// Unnormalized inverse; caller divides by n.
    void backward(std::span<cplx> data) const;

private:
    void execute(bool forward, std::span<cplx> data) const;

    int n_;
    // Plans for SIMD-aligned buffers and a fallback for arbitrary ones.
    void* forward_plan_;
    void* backward_plan_;
    void* forward_unaligned_;
    void* backward_unaligned_;
};

/// One particle's wavefunction sampled on a grid.
struct WaveField {
    GridPtr grid;
    FieldVector amplitudes;

    WaveField() = default;
    explicit WaveField(GridPtr g) : grid(std::move(g)), amplitudes(grid->size()) {}
    WaveField(GridPtr g, std::span<const cplx> a) : grid(std::move(g)), amplitudes(a.begin(), a.end()) {}

    std::vector<double> density() const;
    double norm() const;
};

/// Spectral second derivative: transform, scale mode k by -k^2, inverse transform.
std::vector<cplx> second_derivative(const WaveField& f);

/// Spectral first derivative; the Nyquist mode is dropped.
std::vector<cplx> first_derivative(const WaveField& f);

/// Rectangle rule, exact for band-limited periodic integrands.
double integrate(std::span<const double> values, const Grid& g);

WaveField normalize(const WaveField& f);

}  // namespace qring
