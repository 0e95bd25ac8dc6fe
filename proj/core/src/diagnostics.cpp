#include "eifg/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "eifg/error.hpp"
#include "eifg/spectral.hpp"

namespace eifg {

double sobolev_norm(const Grid& grid, std::span<const Complex> coeffs, int s) {
    if (s < 0 || s > 2) throw ConfigError("Sobolev index must be 0, 1 or 2");
    if (coeffs.size() != grid.total()) throw ConfigError("coefficients do not match grid");
    const int d = grid.dims();
    const std::size_t n0 = grid.size(0);
    const std::size_t n1 = d > 1 ? grid.size(1) : 1;
    const std::size_t n2 = d > 2 ? grid.size(2) : 1;
    auto k2 = [&](int axis, std::size_t j) {
        const double k = grid.wavenumbers(axis)[j];
        return k * k;
    };

    double sum = 0.0;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n0; ++i) {
        for (std::size_t j = 0; j < n1; ++j) {
            const double base = 1.0 + k2(0, i) + (d > 1 ? k2(1, j) : 0.0);
            for (std::size_t l = 0; l < n2; ++l, ++idx) {
                const double w = base + (d > 2 ? k2(2, l) : 0.0);
                const double weight = s == 0 ? 1.0 : (s == 1 ? w : w * w);
                sum += weight * std::norm(coeffs[idx]);
            }
        }
    }
    return std::sqrt(grid.domain().volume() * sum);
}

double sobolev_norm(const SpectralField& u_hat, int s) {
    return sobolev_norm(u_hat.grid(), u_hat.coeffs(), s);
}

ErrorNorms error_norms(const PhysicalField& numeric, const PhysicalField& reference) {
    if (!numeric.grid().same_shape(reference.grid())) throw ConfigError("error fields live on different grids");
    PhysicalField diff(numeric.grid());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = numeric[i] - reference[i];
    const SpectralField d_hat = forward(diff);
    return {sobolev_norm(d_hat, 0), sobolev_norm(d_hat, 1), sobolev_norm(d_hat, 2)};
}

Grid refined_grid(const Grid& grid, int factor) {
    if (factor < 1) throw ConfigError("oversampling factor must be at least 1");
    std::vector<std::size_t> sizes(grid.sizes().begin(), grid.sizes().end());
    for (auto& s : sizes) s *= static_cast<std::size_t>(factor);
    return build_grid(grid.domain(), sizes);
}

ErrorNorms error_norms(const SpectralField& numeric,
                       const std::function<double(double, std::span<const double>)>& exact, double t,
                       int oversample) {
    const Grid fine = refined_grid(numeric.grid(), oversample);
    const PhysicalField u = inverse(resample(numeric, fine));
    PhysicalField ref(fine);
    const int d = fine.dims();
    std::array<double, 3> x{};
    for (std::size_t idx = 0; idx < fine.total(); ++idx) {
        for (int a = 0; a < d; ++a) x[a] = fine.nodes(a)[(idx / fine.stride(a)) % fine.size(a)];
        ref[idx] = exact(t, std::span<const double>(x.data(), static_cast<std::size_t>(d)));
    }
    return error_norms(u, ref);
}

ErrorNorms error_norms(const SpectralField& numeric, const SpectralField& reference) {
    const SpectralField u = resample(numeric, reference.grid());
    ComplexBuffer diff(u.size());
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = u[k] - reference[k];
    const SpectralField d_hat(reference.grid(), std::move(diff));
    return {sobolev_norm(d_hat, 0), sobolev_norm(d_hat, 1), sobolev_norm(d_hat, 2)};
}

double Resolution::nodes() const {
    double n = 1.0;
    for (auto s : sizes) n *= static_cast<double>(s);
    return n;
}

std::optional<double> observed_rate(double coarse, double fine, double ratio) {
    if (!(coarse > 0.0) || !(fine > 0.0) || !std::isfinite(coarse) || !std::isfinite(fine)) return std::nullopt;
    if (!(ratio > 0.0) || ratio == 1.0) return std::nullopt;
    return std::log(coarse / fine) / std::log(ratio);
}

std::optional<double> refinement_ratio(const Resolution& coarse, const Resolution& fine) {
    const bool same_space = coarse.sizes == fine.sizes;
    const bool same_time = coarse.n_steps == fine.n_steps;
    if (same_space == same_time) return std::nullopt;
    if (same_space) return static_cast<double>(fine.n_steps) / static_cast<double>(coarse.n_steps);
    if (coarse.sizes.size() != fine.sizes.size()) return std::nullopt;
    // geometric mean of the per-axis ratios
    return std::pow(fine.nodes() / coarse.nodes(), 1.0 / static_cast<double>(fine.sizes.size()));
}

RateTable rates(std::vector<ErrorRecord> records) {
    RateTable table;
    for (std::size_t i = 0; i < records.size(); ++i) {
        RateRow row{records[i], {}, {}, {}};
        if (i > 0) {
            const auto& prev = records[i - 1];
            if (auto ratio = refinement_ratio(prev.resolution, row.record.resolution)) {
                if (!(*ratio > 1.0)) throw ConfigError("records must be ordered from coarse to fine");
                row.cr0 = observed_rate(prev.errors.e0, row.record.errors.e0, *ratio);
                row.cr1 = observed_rate(prev.errors.e1, row.record.errors.e1, *ratio);
                row.cr2 = observed_rate(prev.errors.e2, row.record.errors.e2, *ratio);
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

double lsq_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope needs at least two paired samples");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

RadiusEstimate interface_radius(const PhysicalField& u) {
    const Grid& g = u.grid();
    if (g.dims() != 2 && g.dims() != 3) throw ConfigError("interface radius needs a 2D or 3D field");
    const auto count = std::count_if(u.values().begin(), u.values().end(), [](double v) { return v > 0.0; });
    if (count == 0) return {0.0, true};
    const double measure = g.cell_volume() * static_cast<double>(count);
    if (g.dims() == 2) return {std::sqrt(measure / std::numbers::pi), false};
    return {std::cbrt(3.0 * measure / (4.0 * std::numbers::pi)), false};
}

double fh_bulk_density(double u, double theta, double theta_c) {
    constexpr double delta = 1e-12;
    const double v = std::clamp(u, -1.0 + delta, 1.0 - delta);
    return 0.5 * theta * ((1.0 + v) * std::log1p(v) + (1.0 - v) * std::log1p(-v)) - 0.5 * theta_c * v * v;
}

double fh_energy(const PhysicalField& u, double epsilon, double theta, double theta_c) {
    const Grid& g = u.grid();
    Transformer tr(g);
    ComplexBuffer u_hat, d_hat;
    tr.forward(u.values(), u_hat);

    std::vector<double> grad2(g.total(), 0.0);
    std::vector<double> du(g.total());
    for (int axis = 0; axis < g.dims(); ++axis) {
        tr.derivative(u_hat, axis, d_hat);
        tr.inverse(d_hat, du);
        for (std::size_t i = 0; i < du.size(); ++i) grad2[i] += du[i] * du[i];
    }

    double sum = 0.0;
    for (std::size_t i = 0; i < g.total(); ++i)
        sum += fh_bulk_density(u[i], theta, theta_c) + 0.5 * epsilon * epsilon * grad2[i];
    return g.cell_volume() * sum;
}

double sup_norm(const PhysicalField& u) {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace eifg
