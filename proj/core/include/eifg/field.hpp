#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <new>
#include <span>
#include <vector>

#include "eifg/grid.hpp"

namespace eifg {

namespace detail {
void* aligned_alloc_bytes(std::size_t bytes);
void aligned_free(void* p) noexcept;
}  // namespace detail

/// Allocator returning SIMD-aligned storage suitable for in-place FFT execution.
template <class T>
struct AlignedAllocator {
    using value_type = T;

    AlignedAllocator() noexcept = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        if (n > std::numeric_limits<std::size_t>::max() / sizeof(T)) throw std::bad_array_new_length();
        return static_cast<T*>(detail::aligned_alloc_bytes(n * sizeof(T)));
    }
    void deallocate(T* p, std::size_t) noexcept { detail::aligned_free(p); }

    template <class U>
    bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using Complex = std::complex<double>;
using ComplexBuffer = std::vector<Complex, AlignedAllocator<Complex>>;

/// Real nodal values u(x_j) on a grid, row-major.
class PhysicalField {
public:
    PhysicalField() = default;
    explicit PhysicalField(Grid grid) : grid_(std::move(grid)), values_(grid_.total(), 0.0) {}
    PhysicalField(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Fourier coefficients u^_k over the retained modes, in DFT order, normalized
/// so that u(x) = sum_k u^_k exp(i k~ . x).
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(Grid grid) : grid_(std::move(grid)), coeffs_(grid_.total(), Complex{}) {}
    SpectralField(Grid grid, ComplexBuffer coeffs);

    const Grid& grid() const { return grid_; }
    std::span<Complex> coeffs() { return coeffs_; }
    std::span<const Complex> coeffs() const { return coeffs_; }
    ComplexBuffer& buffer() { return coeffs_; }
    const ComplexBuffer& buffer() const { return coeffs_; }
    Complex& operator[](std::size_t i) { return coeffs_[i]; }
    const Complex& operator[](std::size_t i) const { return coeffs_[i]; }
    std::size_t size() const { return coeffs_.size(); }

private:
    Grid grid_;
    ComplexBuffer coeffs_;
};

}  // namespace eifg
