#include "eifg/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "eifg/error.hpp"

namespace eifg {

namespace {

// FFTW's planner is not thread-safe; plan execution on distinct arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    ~PlanPair() {
        std::lock_guard lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

std::shared_ptr<const PlanPair> plans_for(const Grid& grid) {
    static std::map<std::vector<std::size_t>, std::shared_ptr<const PlanPair>> cache;
    std::vector<std::size_t> key(grid.sizes().begin(), grid.sizes().end());

    std::lock_guard lock(planner_mutex());
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    std::vector<int> n(key.begin(), key.end());
    auto* scratch = fftw_alloc_complex(grid.total());
    if (scratch == nullptr) throw std::bad_alloc();
    auto pair = std::make_shared<PlanPair>();
    // ESTIMATE keeps the chosen algorithm, and hence the round-off, reproducible.
    pair->fwd = fftw_plan_dft(grid.dims(), n.data(), scratch, scratch, FFTW_FORWARD, FFTW_ESTIMATE);
    pair->bwd = fftw_plan_dft(grid.dims(), n.data(), scratch, scratch, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(scratch);
    if (!pair->fwd || !pair->bwd) throw Error("FFTW failed to create a transform plan");
    cache.emplace(std::move(key), pair);
    return pair;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// Visits the flat layout as (outer, j, inner) blocks along `axis`.
template <class F>
void for_each_along(const Grid& grid, int axis, F&& f) {
    const std::size_t n = grid.size(axis);
    const std::size_t inner = grid.stride(axis);
    const std::size_t outer = grid.total() / (n * inner);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t base = (o * n + j) * inner;
            f(j, base, inner);
        }
    }
}

}  // namespace

DealiasRule parse_dealias_rule(std::string_view name) {
    if (name == "none") return DealiasRule::none;
    if (name == "two_thirds") return DealiasRule::two_thirds;
    throw ConfigError("unknown dealias rule '" + std::string(name) + "'");
}

const char* to_string(DealiasRule rule) {
    return rule == DealiasRule::none ? "none" : "two_thirds";
}

double symmetry_tolerance(std::span<const Complex> coeffs) {
    // |re| + |im| bounds |c| within a factor sqrt(2) and avoids hypot
    double l1 = 0.0;
    for (const auto& c : coeffs) l1 += std::abs(c.real()) + std::abs(c.imag());
    const double levels = std::max(1.0, std::log2(static_cast<double>(coeffs.size())));
    return 10.0 * std::numeric_limits<double>::epsilon() * levels * l1;
}

struct Transformer::Impl {
    Grid grid;
    std::shared_ptr<const PlanPair> plans;
    ComplexBuffer work;
};

Transformer::Transformer(const Grid& grid) : impl_(std::make_unique<Impl>()) {
    impl_->grid = grid;
    impl_->plans = plans_for(grid);
    impl_->work.resize(grid.total());
}

Transformer::~Transformer() = default;
Transformer::Transformer(Transformer&&) noexcept = default;
Transformer& Transformer::operator=(Transformer&&) noexcept = default;

const Grid& Transformer::grid() const { return impl_->grid; }

void Transformer::forward(std::span<const double> u, ComplexBuffer& out) {
    const std::size_t total = impl_->grid.total();
    if (u.size() != total) throw ConfigError("nodal data does not match transform shape");
    out.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        if (!std::isfinite(u[i]))
            throw NumericError("non-finite nodal value at index " + std::to_string(i));
        out[i] = Complex(u[i], 0.0);
    }
    fftw_execute_dft(impl_->plans->fwd, as_fftw(out.data()), as_fftw(out.data()));
    const double scale = 1.0 / static_cast<double>(total);
    for (auto& c : out) c *= scale;
}

void Transformer::inverse(std::span<const Complex> coeffs, std::span<double> out) {
    const std::size_t total = impl_->grid.total();
    if (coeffs.size() != total || out.size() != total)
        throw ConfigError("coefficient data does not match transform shape");
    auto& work = impl_->work;
    std::copy(coeffs.begin(), coeffs.end(), work.begin());
    fftw_execute_dft(impl_->plans->bwd, as_fftw(work.data()), as_fftw(work.data()));

    double residue = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        out[i] = work[i].real();
        residue = std::max(residue, std::abs(work[i].imag()));
    }
    if (!(residue <= symmetry_tolerance(coeffs))) {
        throw NumericError("inverse transform left an imaginary residue of " + std::to_string(residue) +
                           "; coefficients are not Hermitian-symmetric");
    }
}

void Transformer::derivative(std::span<const Complex> coeffs, int axis, ComplexBuffer& out) const {
    const Grid& g = impl_->grid;
    out.resize(g.total());
    const auto k = g.wavenumbers(axis);
    const std::size_t nyquist = g.size(axis) / 2;
    for_each_along(g, axis, [&](std::size_t j, std::size_t base, std::size_t inner) {
        const Complex factor = j == nyquist ? Complex{} : Complex(0.0, k[j]);
        for (std::size_t m = 0; m < inner; ++m) out[base + m] = factor * coeffs[base + m];
    });
}

void Transformer::apply_dealias(std::span<Complex> coeffs, DealiasRule rule) const {
    if (rule == DealiasRule::none) return;
    const Grid& g = impl_->grid;
    for (int axis = 0; axis < g.dims(); ++axis) {
        const std::size_t n = g.size(axis);
        // keep |k| <= N/3, i.e. 3|k| <= N
        for_each_along(g, axis, [&](std::size_t j, std::size_t base, std::size_t inner) {
            const long kk = Grid::mode_index(j, n);
            if (3 * static_cast<std::size_t>(std::labs(kk)) > n)
                std::fill_n(coeffs.begin() + static_cast<std::ptrdiff_t>(base), inner, Complex{});
        });
    }
}

SpectralField forward(const PhysicalField& u) {
    Transformer t(u.grid());
    ComplexBuffer out;
    t.forward(u.values(), out);
    return SpectralField(u.grid(), std::move(out));
}

PhysicalField inverse(const SpectralField& u_hat) {
    Transformer t(u_hat.grid());
    PhysicalField out(u_hat.grid());
    t.inverse(u_hat.coeffs(), out.values());
    return out;
}

std::vector<SpectralField> gradient(const SpectralField& u_hat) {
    Transformer t(u_hat.grid());
    std::vector<SpectralField> out;
    out.reserve(u_hat.grid().dims());
    for (int axis = 0; axis < u_hat.grid().dims(); ++axis) {
        ComplexBuffer d;
        t.derivative(u_hat.coeffs(), axis, d);
        out.emplace_back(u_hat.grid(), std::move(d));
    }
    return out;
}

SpectralField dealias(const SpectralField& u_hat, DealiasRule rule) {
    SpectralField out = u_hat;
    Transformer(u_hat.grid()).apply_dealias(out.coeffs(), rule);
    return out;
}

SpectralField resample(const SpectralField& u_hat, const Grid& target) {
    const Grid& g = u_hat.grid();
    if (target.dims() != g.dims()) throw ConfigError("resample target has a different dimension");
    for (int axis = 0; axis < g.dims(); ++axis) {
        if (target.size(axis) < g.size(axis)) throw ConfigError("resample only refines");
    }
    if (target.same_shape(g)) return SpectralField(target, u_hat.buffer());

    // per axis: source position -> (target position, weight) pairs
    struct Slot {
        std::size_t pos;
        double weight;
    };
    std::array<std::vector<std::vector<Slot>>, 3> map;
    for (int axis = 0; axis < 3; ++axis) {
        const std::size_t n = axis < g.dims() ? g.size(axis) : 1;
        const std::size_t m = axis < g.dims() ? target.size(axis) : 1;
        map[axis].resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (axis >= g.dims()) {
                map[axis][j] = {{0, 1.0}};
                continue;
            }
            const long k = Grid::mode_index(j, n);
            auto wrap = [m](long kk) { return static_cast<std::size_t>(kk < 0 ? kk + static_cast<long>(m) : kk); };
            if (m > n && k == -static_cast<long>(n / 2)) {
                map[axis][j] = {{wrap(k), 0.5}, {wrap(-k), 0.5}};
            } else {
                map[axis][j] = {{wrap(k), 1.0}};
            }
        }
    }

    SpectralField out(target);
    const std::size_t n1 = g.dims() > 1 ? g.size(1) : 1;
    const std::size_t n2 = g.dims() > 2 ? g.size(2) : 1;
    const std::size_t m1 = g.dims() > 1 ? target.size(1) : 1;
    const std::size_t m2 = g.dims() > 2 ? target.size(2) : 1;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < g.size(0); ++i)
        for (std::size_t j = 0; j < n1; ++j)
            for (std::size_t l = 0; l < n2; ++l, ++idx) {
                const Complex v = u_hat[idx];
                for (const auto& a : map[0][i])
                    for (const auto& b : map[1][j])
                        for (const auto& c : map[2][l])
                            out[(a.pos * m1 + b.pos) * m2 + c.pos] += (a.weight * b.weight * c.weight) * v;
            }
    return out;
}

}  // namespace eifg
