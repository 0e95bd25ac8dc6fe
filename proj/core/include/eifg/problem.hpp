#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eifg/field.hpp"
#include "eifg/grid.hpp"

namespace eifg {

/// Inputs to a pointwise reaction evaluation. `grad` holds one nodal array per
/// axis and is empty unless the problem is gradient dependent.
struct ReactionArgs {
    double t = 0.0;
    const Grid& grid;
    std::span<const double> u;
    std::span<const std::span<const double>> grad;
};

using ReactionFn = std::function<void(const ReactionArgs&, std::span<double> out)>;

/// Conservative term -d/dx_axis F(u), with F applied pointwise at the nodes and
/// differentiated spectrally.
struct FluxTerm {
    int axis = 0;
    std::function<void(std::span<const double> u, std::span<double> flux)> flux;
};

using ExactFn = std::function<double(double t, std::span<const double> x)>;
using InitialFn = std::function<PhysicalField(const Grid&)>;
using ParamMap = std::map<std::string, double>;

/// u_t = D Lap u + g(t, u, grad u) on a periodic box.
struct Problem {
    std::string name;
    DomainSpec domain;
    ReactionFn reaction;
    bool gradient_dependent = false;
    std::optional<FluxTerm> flux;
    ExactFn exact;
    InitialFn initial;
    ParamMap params;

    // diagnostics this problem supports
    bool reports_energy = false;
    bool reports_radius = false;

    bool has_exact() const { return static_cast<bool>(exact); }

    /// Exact solution sampled at the grid nodes. Throws ConfigError if absent.
    PhysicalField sample_exact(const Grid& grid, double t) const;
    /// Initial data on the grid (sampled exact solution when no explicit u0).
    PhysicalField initial_field(const Grid& grid) const;
};

/// Full nodal right-hand side g(t, u, grad u) - d_axis F(u). Gradients (and
/// the flux divergence) are computed spectrally from `u`.
PhysicalField eval_reaction(const Problem& problem, double t, const PhysicalField& u,
                            std::span<const PhysicalField> grad = {});

// Manufactured reaction-diffusion problem on [0,1]^3 with exact solution
// e^{-t} prod_i x_i^2 (x_i-1)^2 sin(2 pi x_i).
Problem example1();

/// Allen-Cahn interface motion on [-1/2,1/2]^d from a tanh circle/sphere of radius R0 = 0.4.
Problem example_mcf(double epsilon, int dims);

/// Sharp-interface limit radius sqrt(R0^2 + 2(1-d)t); NaN once it has collapsed.
double limit_radius(double t, int dims, double r0 = 0.4);

enum class BurgersForm { conservative, advective };

/// Viscous Burgers u_t = eps Lap u - (u^2/2)_x on [0,2]x[0,1]x[0,1].
Problem example_burgers(double epsilon, BurgersForm form = BurgersForm::conservative);

/// Allen-Cahn with Flory-Huggins potential on [0,1]^3, random initial data in [-0.9,0.9].
Problem example_fh(double epsilon, double theta, double theta_c, std::uint64_t seed);

/// Flory-Huggins reaction (theta/2) ln((1-u)/(1+u)) + theta_c u, clamped away from +-1.
double fh_reaction(double u, double theta, double theta_c);

/// Heat equation (g = 0) on [0,2pi]^d with u0 = prod sin(x_i).
Problem heat_problem(int dims, double diffusion = 1.0);

/// Looks a problem up by name: example1, mcf, burgers, fh, heat.
Problem make_problem(const std::string& name, const ParamMap& params, std::uint64_t seed = 0);

/// Uniform [lo, hi] nodal values from a fixed-seed 64-bit generator; identical
/// across platforms for a given seed.
std::vector<double> seeded_uniform(std::size_t count, double lo, double hi, std::uint64_t seed);

}  // namespace eifg
