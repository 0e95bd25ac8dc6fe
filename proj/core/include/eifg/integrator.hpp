#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "eifg/field.hpp"
#include "eifg/phi.hpp"
#include "eifg/problem.hpp"
#include "eifg/spectral.hpp"

namespace eifg {

/// Numerical solution u^_N^n at time t_n.
struct State {
    double time = 0.0;
    SpectralField field;
    long step = 0;
};

/// Everything a uniform step of size tau needs that does not depend on the
/// solution: the exponentials e^{-c_i tau lambda} and the phi-weight tensors.
class StepPlan {
public:
    StepPlan(const Grid& grid, Tableau tableau, double tau, DealiasRule dealias = DealiasRule::none);

    const Grid& grid() const { return grid_; }
    const Tableau& tableau() const { return tableau_; }
    double tau() const { return tau_; }
    DealiasRule dealias() const { return dealias_; }

    /// e^{-tau lambda}
    std::span<const double> decay() const { return decay_; }
    /// e^{-c_i tau lambda}
    std::span<const double> stage_decay(int i) const { return stage_decay_[i]; }
    /// a_ij(-tau lambda); empty span when the coefficient is identically zero.
    std::span<const double> a(int i, int j) const { return a_[i][j]; }
    std::span<const double> b(int i) const { return b_[i]; }

private:
    Grid grid_;
    Tableau tableau_;
    double tau_;
    DealiasRule dealias_;
    std::vector<double> decay_;
    std::vector<std::vector<double>> stage_decay_;
    std::vector<std::vector<std::vector<double>>> a_;
    std::vector<std::vector<double>> b_;
};

/// Observer invoked as (step index, time, state).
using Observer = std::function<void(long, double, const State&)>;

/// Stepper owning the transform and stage work arrays for one simulation.
/// Plans are rebuilt only when the step size changes.
class Integrator {
public:
    Integrator(const Grid& grid, Problem problem, Tableau tableau, DealiasRule dealias = DealiasRule::none);
    ~Integrator();
    Integrator(Integrator&&) noexcept;
    Integrator& operator=(Integrator&&) noexcept;

    const Grid& grid() const;
    const Problem& problem() const;

    /// Advances `state` by tau in place. Throws BlowUpError on a non-finite or
    /// runaway (> 1e100) stage value.
    void step(State& state, double tau);
    /// Same, with an externally built plan for this grid.
    void step(State& state, const StepPlan& plan);

    /// Spectral right-hand side G^ = I_N g(t, u) for coefficients `u_hat`.
    void evaluate(double t, std::span<const Complex> u_hat, ComplexBuffer& g_hat);

    const StepPlan& plan(double tau);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One step of the scheme with a prebuilt plan.
State step(const State& state, const StepPlan& plan, const Problem& problem);

struct IntegrateOptions {
    DealiasRule dealias = DealiasRule::none;
    long observer_stride = 0;  // 0: observer sees only the initial and final states
    Observer observer;
};

/// Advances u0 to time T with n_steps uniform steps of T/n_steps.
State integrate(const PhysicalField& u0, double T, long n_steps, const Tableau& tableau, const Problem& problem,
                const IntegrateOptions& options = {});

/// Largest coefficient magnitude that does not count as a blow-up.
inline constexpr double kBlowUpThreshold = 1e100;

}  // namespace eifg
