#include "eifg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "eifg/error.hpp"

namespace eifg {

double DomainSpec::volume() const {
    double v = 1.0;
    for (int i = 0; i < dims; ++i) v *= length(i);
    return v;
}

void DomainSpec::validate() const {
    if (dims < 1 || dims > 3)
        throw ConfigError("domain dimension must be 1, 2 or 3 (got " + std::to_string(dims) + ")");
    for (int i = 0; i < dims; ++i) {
        if (!(upper[i] > lower[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i]))
            throw ConfigError("domain axis " + std::to_string(i) + " needs b > a");
    }
    if (!(diffusion > 0.0) || !std::isfinite(diffusion))
        throw ConfigError("diffusion coefficient must be positive");
}

DomainSpec DomainSpec::cube(int dims, double lo, double hi, double diffusion) {
    DomainSpec d;
    d.dims = dims;
    d.lower.fill(lo);
    d.upper.fill(hi);
    d.diffusion = diffusion;
    return d;
}

double Grid::spacing(int axis) const {
    return domain_.length(axis) / static_cast<double>(sizes_[axis]);
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < dims(); ++i) v *= spacing(i);
    return v;
}

long Grid::mode_index(std::size_t j, std::size_t n) {
    const auto half = static_cast<long>(n / 2);
    const auto k = static_cast<long>(j);
    return k < half ? k : k - static_cast<long>(n);
}

bool Grid::same_shape(const Grid& other) const {
    return sizes_ == other.sizes_;
}

Grid build_grid(const DomainSpec& domain, std::span<const std::size_t> sizes) {
    domain.validate();
    if (sizes.size() != static_cast<std::size_t>(domain.dims))
        throw ConfigError("grid has " + std::to_string(sizes.size()) + " sizes for a " +
                          std::to_string(domain.dims) + "-dimensional domain");
    for (std::size_t n : sizes) {
        if (n < 2 || n % 2 != 0)
            throw ConfigError("grid size must be even and >= 2 (got " + std::to_string(n) + ")");
    }

    Grid g;
    g.domain_ = domain;
    g.sizes_.assign(sizes.begin(), sizes.end());
    g.strides_.assign(sizes.size(), 1);
    for (int i = domain.dims - 2; i >= 0; --i) g.strides_[i] = g.strides_[i + 1] * g.sizes_[i + 1];
    g.total_ = g.strides_[0] * g.sizes_[0];

    g.nodes_.resize(sizes.size());
    g.wavenumbers_.resize(sizes.size());
    for (int axis = 0; axis < domain.dims; ++axis) {
        const std::size_t n = g.sizes_[axis];
        const double len = domain.length(axis);
        const double scale = 2.0 * std::numbers::pi / len;
        auto& x = g.nodes_[axis];
        auto& k = g.wavenumbers_[axis];
        x.resize(n);
        k.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            x[j] = domain.lower[axis] + static_cast<double>(j) * len / static_cast<double>(n);
            k[j] = scale * static_cast<double>(Grid::mode_index(j, n));
        }
    }
    return g;
}

Grid build_grid(const DomainSpec& domain, std::initializer_list<std::size_t> sizes) {
    return build_grid(domain, std::span<const std::size_t>(sizes.begin(), sizes.size()));
}

double Symbol::max() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

Symbol laplacian_symbol(const Grid& grid) {
    const int d = grid.dims();
    // per-axis squared wavenumbers, combined as an outer sum
    std::vector<std::vector<double>> k2(d);
    for (int axis = 0; axis < d; ++axis) {
        auto k = grid.wavenumbers(axis);
        k2[axis].resize(k.size());
        for (std::size_t j = 0; j < k.size(); ++j) k2[axis][j] = k[j] * k[j];
    }

    Symbol sym;
    sym.values.resize(grid.total());
    const double D = grid.domain().diffusion;
    const std::size_t n0 = grid.size(0);
    const std::size_t n1 = d > 1 ? grid.size(1) : 1;
    const std::size_t n2 = d > 2 ? grid.size(2) : 1;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n0; ++i) {
        for (std::size_t j = 0; j < n1; ++j) {
            const double s01 = k2[0][i] + (d > 1 ? k2[1][j] : 0.0);
            for (std::size_t l = 0; l < n2; ++l) {
                sym.values[idx++] = D * (s01 + (d > 2 ? k2[2][l] : 0.0));
            }
        }
    }
    return sym;
}

double symbol_bound(const Grid& grid) {
    double s = 0.0;
    for (int axis = 0; axis < grid.dims(); ++axis) {
        const double kmax = std::numbers::pi * static_cast<double>(grid.size(axis)) / grid.domain().length(axis);
        s += kmax * kmax;
    }
    return grid.domain().diffusion * s;
}

}  // namespace eifg
