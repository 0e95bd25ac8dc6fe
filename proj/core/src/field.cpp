#include "eifg/field.hpp"

#include <fftw3.h>

#include <new>

#include "eifg/error.hpp"

namespace eifg {

namespace detail {

void* aligned_alloc_bytes(std::size_t bytes) {
    void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
    if (p == nullptr) throw std::bad_alloc();
    return p;
}

void aligned_free(void* p) noexcept { fftw_free(p); }

}  // namespace detail

PhysicalField::PhysicalField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.total()) throw ConfigError("nodal data does not match grid shape");
}

SpectralField::SpectralField(Grid grid, ComplexBuffer coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.total()) throw ConfigError("coefficient data does not match grid shape");
}

}  // namespace eifg
