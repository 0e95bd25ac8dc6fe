#include "eifg/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eifg/error.hpp"

namespace eifg {

StepPlan::StepPlan(const Grid& grid, Tableau tableau, double tau, DealiasRule dealias)
    : grid_(grid), tableau_(std::move(tableau)), tau_(tau), dealias_(dealias) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("step size must be positive");
    const Symbol symbol = laplacian_symbol(grid);
    const std::size_t n = symbol.values.size();
    const int s = tableau_.stages;

    decay_.resize(n);
    for (std::size_t k = 0; k < n; ++k) decay_[k] = std::exp(-tau * symbol.values[k]);

    stage_decay_.resize(s);
    for (int i = 0; i < s; ++i) {
        const double c = tableau_.nodes[i];
        auto& sd = stage_decay_[i];
        sd.resize(n);
        for (std::size_t k = 0; k < n; ++k) sd[k] = std::exp(-c * tau * symbol.values[k]);
    }

    a_.assign(s, std::vector<std::vector<double>>(s));
    for (int i = 1; i < s; ++i)
        for (int j = 0; j < i; ++j)
            if (!tableau_.a[i][j].empty()) a_[i][j] = eval_combo(tableau_.a[i][j], tau, symbol);

    b_.resize(s);
    for (int i = 0; i < s; ++i) b_[i] = eval_combo(tableau_.b[i], tau, symbol);
}

namespace {

double max_magnitude(std::span<const Complex> v) {
    double m = 0.0;
    for (const auto& c : v) {
        const double a = std::max(std::abs(c.real()), std::abs(c.imag()));
        if (!(a <= m)) m = a;  // propagates NaN
        if (std::isnan(a)) return a;
    }
    return m;
}

void check_blow_up(std::span<const Complex> v, long step, const char* where) {
    const double m = max_magnitude(v);
    if (!std::isfinite(m) || m > kBlowUpThreshold) {
        std::ostringstream os;
        os << "numerical blow-up in " << where << " of step " << step << " (max |coefficient| = " << m << ")";
        throw BlowUpError(step, m, os.str());
    }
}

}  // namespace

struct Integrator::Impl {
    Grid grid;
    Problem problem;
    Tableau tableau;
    DealiasRule dealias;
    Transformer transform;
    std::unique_ptr<StepPlan> plan;

    ComplexBuffer stage;
    std::vector<ComplexBuffer> g_hat;
    ComplexBuffer scratch;
    ComplexBuffer flux_hat;
    std::vector<double> u_nodal;
    std::vector<double> g_nodal;
    std::vector<std::vector<double>> grad_nodal;

    Impl(const Grid& g, Problem p, Tableau t, DealiasRule rule)
        : grid(g), problem(std::move(p)), tableau(std::move(t)), dealias(rule), transform(g) {
        const std::size_t n = g.total();
        stage.resize(n);
        g_hat.assign(tableau.stages, ComplexBuffer(n));
        scratch.resize(n);
        u_nodal.resize(n);
        g_nodal.resize(n);
        if (problem.gradient_dependent) grad_nodal.assign(g.dims(), std::vector<double>(n));
    }

    void evaluate(double t, std::span<const Complex> u_hat, ComplexBuffer& out) {
        const std::size_t n = grid.total();
        out.resize(n);
        transform.inverse(u_hat, u_nodal);

        if (problem.reaction) {
            std::vector<std::span<const double>> grad_views;
            if (problem.gradient_dependent) {
                for (int axis = 0; axis < grid.dims(); ++axis) {
                    transform.derivative(u_hat, axis, scratch);
                    transform.inverse(scratch, grad_nodal[axis]);
                    grad_views.emplace_back(grad_nodal[axis]);
                }
            }
            problem.reaction(ReactionArgs{t, grid, u_nodal, grad_views}, g_nodal);
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(g_nodal[i]))
                    throw NumericError("reaction of problem '" + problem.name + "' is not finite at t = " +
                                       std::to_string(t));
            }
            transform.forward(g_nodal, out);
        } else {
            std::fill(out.begin(), out.end(), Complex{});
        }

        if (problem.flux) {
            problem.flux->flux(u_nodal, g_nodal);
            transform.forward(g_nodal, flux_hat);
            transform.apply_dealias(flux_hat, dealias);
            transform.derivative(flux_hat, problem.flux->axis, scratch);
            for (std::size_t k = 0; k < n; ++k) out[k] -= scratch[k];
        }
        transform.apply_dealias(out, dealias);
    }

    void advance(State& state, const StepPlan& p) {
        if (!state.field.grid().same_shape(grid)) throw ConfigError("state and plan use different grids");
        const std::size_t n = grid.total();
        const int s = p.tableau().stages;
        const double tau = p.tau();
        auto u = state.field.coeffs();

        for (int i = 0; i < s; ++i) {
            const double c = p.tableau().nodes[i];
            if (i == 0 && c == 0.0) {
                std::copy(u.begin(), u.end(), stage.begin());
            } else {
                const auto sd = p.stage_decay(i);
                for (std::size_t k = 0; k < n; ++k) stage[k] = sd[k] * u[k];
                for (int j = 0; j < i; ++j) {
                    const auto a = p.a(i, j);
                    if (a.empty()) continue;
                    const auto& g = g_hat[j];
                    for (std::size_t k = 0; k < n; ++k) stage[k] += (tau * a[k]) * g[k];
                }
                check_blow_up(stage, state.step, "a stage");
            }
            evaluate(state.time + c * tau, stage, g_hat[i]);
        }

        const auto decay = p.decay();
        for (std::size_t k = 0; k < n; ++k) u[k] *= decay[k];
        for (int i = 0; i < s; ++i) {
            const auto b = p.b(i);
            const auto& g = g_hat[i];
            for (std::size_t k = 0; k < n; ++k) u[k] += (tau * b[k]) * g[k];
        }
        check_blow_up(u, state.step, "the update");
        state.time += tau;
        ++state.step;
    }
};

Integrator::Integrator(const Grid& grid, Problem problem, Tableau tableau, DealiasRule dealias)
    : impl_(std::make_unique<Impl>(grid, std::move(problem), std::move(tableau), dealias)) {}

Integrator::~Integrator() = default;
Integrator::Integrator(Integrator&&) noexcept = default;
Integrator& Integrator::operator=(Integrator&&) noexcept = default;

const Grid& Integrator::grid() const { return impl_->grid; }
const Problem& Integrator::problem() const { return impl_->problem; }

const StepPlan& Integrator::plan(double tau) {
    if (!impl_->plan || impl_->plan->tau() != tau)
        impl_->plan = std::make_unique<StepPlan>(impl_->grid, impl_->tableau, tau, impl_->dealias);
    return *impl_->plan;
}

void Integrator::step(State& state, double tau) {
    impl_->advance(state, plan(tau));
}

void Integrator::step(State& state, const StepPlan& plan) {
    impl_->advance(state, plan);
}

void Integrator::evaluate(double t, std::span<const Complex> u_hat, ComplexBuffer& g_hat) {
    impl_->evaluate(t, u_hat, g_hat);
}

State step(const State& state, const StepPlan& plan, const Problem& problem) {
    Integrator integrator(plan.grid(), problem, plan.tableau(), plan.dealias());
    State next = state;
    integrator.step(next, plan);
    return next;
}

State integrate(const PhysicalField& u0, double T, long n_steps, const Tableau& tableau, const Problem& problem,
                const IntegrateOptions& options) {
    if (n_steps < 1) throw ConfigError("n_steps must be at least 1");
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("final time must be positive");

    Integrator integrator(u0.grid(), problem, tableau, options.dealias);
    State state{0.0, forward(u0), 0};
    const double tau = T / static_cast<double>(n_steps);

    if (options.observer) options.observer(0, 0.0, state);
    for (long n = 1; n <= n_steps; ++n) {
        integrator.step(state, tau);
        // pin the clock to n*T/N_T so the final time is T exactly
        state.time = T * (static_cast<double>(n) / static_cast<double>(n_steps));
        const bool due = options.observer_stride > 0 && n % options.observer_stride == 0;
        if (options.observer && (due || n == n_steps)) options.observer(n, state.time, state);
    }
    return state;
}

}  // namespace eifg
