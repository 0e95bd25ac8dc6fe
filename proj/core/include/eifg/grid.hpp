#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace eifg {

/// Periodic box [a_1,b_1] x ... x [a_d,b_d] with diffusion coefficient D.
struct DomainSpec {
    int dims = 1;
    std::array<double, 3> lower{0.0, 0.0, 0.0};
    std::array<double, 3> upper{1.0, 1.0, 1.0};
    double diffusion = 1.0;

    double length(int axis) const { return upper[axis] - lower[axis]; }
    double volume() const;

    /// Throws ConfigError when dims, bounds or D are invalid.
    void validate() const;

    /// Cube [lo,hi]^d.
    static DomainSpec cube(int dims, double lo, double hi, double diffusion = 1.0);
};

/// Uniform collocation grid over a DomainSpec together with the scaled
/// wavenumbers of the retained Fourier modes.
///
/// Wavenumbers are stored per axis in DFT order 0, 1, ..., N/2-1, -N/2, ..., -1,
/// scaled as 2*pi*k/(b-a). Flat storage of every field on the grid is
/// row-major with the last axis fastest.
class Grid {
public:
    Grid() = default;

    const DomainSpec& domain() const { return domain_; }
    int dims() const { return domain_.dims; }
    std::size_t size(int axis) const { return sizes_[axis]; }
    std::span<const std::size_t> sizes() const { return {sizes_.data(), sizes_.size()}; }
    std::size_t total() const { return total_; }

    /// Node spacing (b-a)/N along an axis.
    double spacing(int axis) const;
    double cell_volume() const;

    std::span<const double> nodes(int axis) const { return nodes_[axis]; }
    std::span<const double> wavenumbers(int axis) const { return wavenumbers_[axis]; }
    /// Integer mode index k in [-N/2, N/2-1] stored at DFT position j.
    static long mode_index(std::size_t j, std::size_t n);

    /// Strides of the row-major layout.
    std::size_t stride(int axis) const { return strides_[axis]; }

    bool same_shape(const Grid& other) const;

    friend Grid build_grid(const DomainSpec& domain, std::span<const std::size_t> sizes);

private:
    DomainSpec domain_;
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 0;
    std::vector<std::vector<double>> nodes_;
    std::vector<std::vector<double>> wavenumbers_;
};

/// Builds the grid; every size must be even and at least 2, one per axis.
Grid build_grid(const DomainSpec& domain, std::span<const std::size_t> sizes);
Grid build_grid(const DomainSpec& domain, std::initializer_list<std::size_t> sizes);

/// Diagonal multiplier D*|k~|^2 of the negative Laplacian over all retained modes.
struct Symbol {
    std::vector<double> values;

    double max() const;
};

Symbol laplacian_symbol(const Grid& grid);

/// Analytic upper end of the spectrum, D * sum_i (pi N_i/(b_i-a_i))^2.
double symbol_bound(const Grid& grid);

}  // namespace eifg
