#pragma once

#include <memory>
#include <span>
#include <vector>

#include "eifg/field.hpp"

namespace eifg {

enum class DealiasRule { none, two_thirds };

DealiasRule parse_dealias_rule(std::string_view name);
const char* to_string(DealiasRule rule);

/// Nodal -> coefficients with the 1/prod(N_i) factor on the forward side.
/// Throws NumericError on non-finite input.
SpectralField forward(const PhysicalField& u);

/// Coefficients -> nodal values. The imaginary residue left by round-off is
/// dropped; a residue above the symmetry tolerance throws NumericError.
PhysicalField inverse(const SpectralField& u_hat);

/// Spectral partial derivatives i*k~_i*u^_k, one field per axis, with the
/// unpaired mode k_i = -N_i/2 zeroed.
std::vector<SpectralField> gradient(const SpectralField& u_hat);

SpectralField dealias(const SpectralField& u_hat, DealiasRule rule);

/// Trigonometric interpolant of `u_hat` re-expressed on a grid with at least
/// as many modes per axis (zero padding). The unpaired -N/2 coefficient is
/// split evenly between +-N/2 so real fields stay real.
SpectralField resample(const SpectralField& u_hat, const Grid& target);

/// Largest admissible imaginary residue after synthesizing `coeffs`.
double symmetry_tolerance(std::span<const Complex> coeffs);

/// Reusable transform bound to one grid shape. Execution is reentrant as long
/// as each thread uses its own Transformer; plans are shared process-wide.
class Transformer {
public:
    explicit Transformer(const Grid& grid);
    ~Transformer();
    Transformer(Transformer&&) noexcept;
    Transformer& operator=(Transformer&&) noexcept;

    const Grid& grid() const;

    /// out <- forward(u); `out` is resized when needed.
    void forward(std::span<const double> u, ComplexBuffer& out);
    /// out <- Re(inverse(coeffs)); uses an internal work array.
    void inverse(std::span<const Complex> coeffs, std::span<double> out);
    /// d/dx_axis of coeffs into out (spectral).
    void derivative(std::span<const Complex> coeffs, int axis, ComplexBuffer& out) const;
    void apply_dealias(std::span<Complex> coeffs, DealiasRule rule) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace eifg
