#include "eifg/problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <limits>
#include <random>

#include "eifg/error.hpp"
#include "eifg/spectral.hpp"

namespace eifg {

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
void for_each_node(const Grid& grid, F&& f) {
    const int d = grid.dims();
    const std::size_t n0 = grid.size(0);
    const std::size_t n1 = d > 1 ? grid.size(1) : 1;
    const std::size_t n2 = d > 2 ? grid.size(2) : 1;
    std::array<double, 3> x{};
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n0; ++i) {
        x[0] = grid.nodes(0)[i];
        for (std::size_t j = 0; j < n1; ++j) {
            if (d > 1) x[1] = grid.nodes(1)[j];
            for (std::size_t l = 0; l < n2; ++l) {
                if (d > 2) x[2] = grid.nodes(2)[l];
                f(idx++, std::span<const double>(x.data(), static_cast<std::size_t>(d)));
            }
        }
    }
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive");
}

double param_or(const ParamMap& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

// Example 1 building blocks: p(s) = s^2 (s-1)^2 sin(2 pi s) and p''(s).
double ex1_profile(double s) {
    const double q = s * s * (s - 1.0) * (s - 1.0);
    return q * std::sin(2.0 * kPi * s);
}

double ex1_profile_dd(double s) {
    const double q = s * s * (s - 1.0) * (s - 1.0);
    const double dq = 4.0 * s * s * s - 6.0 * s * s + 2.0 * s;
    const double ddq = 12.0 * s * s - 12.0 * s + 2.0;
    const double w = std::sin(2.0 * kPi * s);
    const double dw = 2.0 * kPi * std::cos(2.0 * kPi * s);
    const double ddw = -4.0 * kPi * kPi * w;
    return ddq * w + 2.0 * dq * dw + q * ddw;
}

}  // namespace

PhysicalField Problem::sample_exact(const Grid& grid, double t) const {
    if (!exact) throw ConfigError("problem '" + name + "' has no exact solution");
    PhysicalField out(grid);
    auto v = out.values();
    for_each_node(grid, [&](std::size_t idx, std::span<const double> x) { v[idx] = exact(t, x); });
    return out;
}

PhysicalField Problem::initial_field(const Grid& grid) const {
    if (initial) return initial(grid);
    return sample_exact(grid, 0.0);
}

PhysicalField eval_reaction(const Problem& problem, double t, const PhysicalField& u,
                            std::span<const PhysicalField> grad) {
    const Grid& grid = u.grid();
    Transformer tr(grid);
    PhysicalField out(grid);

    std::vector<PhysicalField> own_grad;
    if (problem.gradient_dependent && grad.empty()) {
        ComplexBuffer u_hat, d_hat;
        tr.forward(u.values(), u_hat);
        for (int axis = 0; axis < grid.dims(); ++axis) {
            tr.derivative(u_hat, axis, d_hat);
            PhysicalField g(grid);
            tr.inverse(d_hat, g.values());
            own_grad.push_back(std::move(g));
        }
        grad = own_grad;
    }
    if (problem.gradient_dependent && grad.size() != static_cast<std::size_t>(grid.dims()))
        throw ConfigError("gradient must have one component per axis");

    if (problem.reaction) {
        std::vector<std::span<const double>> grad_views;
        if (problem.gradient_dependent)
            for (const auto& g : grad) grad_views.push_back(g.values());
        problem.reaction(ReactionArgs{t, grid, u.values(), grad_views}, out.values());
    }

    if (problem.flux) {
        std::vector<double> w(grid.total());
        problem.flux->flux(u.values(), w);
        ComplexBuffer w_hat, dw_hat;
        tr.forward(w, w_hat);
        tr.derivative(w_hat, problem.flux->axis, dw_hat);
        std::vector<double> dw(grid.total());
        tr.inverse(dw_hat, dw);
        for (std::size_t i = 0; i < dw.size(); ++i) out[i] -= dw[i];
    }

    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!std::isfinite(out[i]))
            throw NumericError("reaction of problem '" + problem.name + "' is not finite");
    }
    return out;
}

Problem example1() {
    Problem p;
    p.name = "example1";
    p.domain = DomainSpec::cube(3, 0.0, 1.0, 1.0);
    p.exact = [](double t, std::span<const double> x) {
        return std::exp(-t) * ex1_profile(x[0]) * ex1_profile(x[1]) * ex1_profile(x[2]);
    };
    // g = -u + f with f = u_t - Lap u + u = -e^{-t} Lap S for the separable profile S.
    p.reaction = [](const ReactionArgs& args, std::span<double> out) {
        const Grid& g = args.grid;
        std::array<std::vector<double>, 3> prof, prof_dd;
        for (int axis = 0; axis < 3; ++axis) {
            auto x = g.nodes(axis);
            prof[axis].resize(x.size());
            prof_dd[axis].resize(x.size());
            for (std::size_t j = 0; j < x.size(); ++j) {
                prof[axis][j] = ex1_profile(x[j]);
                prof_dd[axis][j] = ex1_profile_dd(x[j]);
            }
        }
        const double decay = std::exp(-args.t);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < g.size(0); ++i)
            for (std::size_t j = 0; j < g.size(1); ++j)
                for (std::size_t l = 0; l < g.size(2); ++l, ++idx) {
                    const double lap = prof_dd[0][i] * prof[1][j] * prof[2][l] +
                                       prof[0][i] * prof_dd[1][j] * prof[2][l] +
                                       prof[0][i] * prof[1][j] * prof_dd[2][l];
                    out[idx] = -args.u[idx] - decay * lap;
                }
    };
    return p;
}

double limit_radius(double t, int dims, double r0) {
    const double r2 = r0 * r0 + 2.0 * (1.0 - dims) * t;
    return r2 >= 0.0 ? std::sqrt(r2) : std::numeric_limits<double>::quiet_NaN();
}

Problem example_mcf(double epsilon, int dims) {
    require_positive(epsilon, "epsilon");
    if (dims != 2 && dims != 3) throw ConfigError("mean curvature flow needs d = 2 or 3");
    constexpr double r0 = 0.4;
    Problem p;
    p.name = "mcf";
    p.domain = DomainSpec::cube(dims, -0.5, 0.5, 1.0);
    p.params = {{"epsilon", epsilon}, {"dims", dims}, {"R0", r0}};
    p.reports_radius = true;
    const double inv_eps2 = 1.0 / (epsilon * epsilon);
    p.reaction = [inv_eps2](const ReactionArgs& args, std::span<double> out) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double u = args.u[i];
            out[i] = -inv_eps2 * (u * u * u - u);
        }
    };
    p.initial = [epsilon](const Grid& grid) {
        PhysicalField u(grid);
        auto v = u.values();
        const double scale = 1.0 / (std::numbers::sqrt2 * epsilon);
        for_each_node(grid, [&](std::size_t idx, std::span<const double> x) {
            double r2 = 0.0;
            for (double xi : x) r2 += xi * xi;
            v[idx] = std::tanh((r0 - std::sqrt(r2)) * scale);
        });
        return u;
    };
    return p;
}

Problem example_burgers(double epsilon, BurgersForm form) {
    require_positive(epsilon, "epsilon");
    Problem p;
    p.name = "burgers";
    p.domain.dims = 3;
    p.domain.lower = {0.0, 0.0, 0.0};
    p.domain.upper = {2.0, 1.0, 1.0};
    p.domain.diffusion = epsilon;
    p.params = {{"epsilon", epsilon}, {"advective", form == BurgersForm::advective ? 1.0 : 0.0}};
    p.exact = [epsilon](double t, std::span<const double> x) {
        const double e = std::exp(-kPi * kPi * epsilon * t);
        return 2.0 * epsilon * kPi * e * std::sin(kPi * x[0]) / (2.0 + e * std::cos(kPi * x[0]));
    };
    if (form == BurgersForm::conservative) {
        p.flux = FluxTerm{0, [](std::span<const double> u, std::span<double> w) {
                              for (std::size_t i = 0; i < u.size(); ++i) w[i] = 0.5 * u[i] * u[i];
                          }};
    } else {
        p.gradient_dependent = true;
        p.reaction = [](const ReactionArgs& args, std::span<double> out) {
            const auto ux = args.grad[0];
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = -args.u[i] * ux[i];
        };
    }
    return p;
}

double fh_reaction(double u, double theta, double theta_c) {
    constexpr double delta = 1e-12;
    // evaluated on |u| and re-signed so the reaction is exactly odd
    const double v = std::min(std::abs(u), 1.0 - delta);
    const double g = 0.5 * theta * std::log((1.0 - v) / (1.0 + v)) + theta_c * v;
    return u < 0.0 ? -g : g;
}

Problem example_fh(double epsilon, double theta, double theta_c, std::uint64_t seed) {
    require_positive(epsilon, "epsilon");
    require_positive(theta, "theta");
    require_positive(theta_c, "theta_c");
    Problem p;
    p.name = "fh";
    p.domain = DomainSpec::cube(3, 0.0, 1.0, epsilon * epsilon);
    p.params = {{"epsilon", epsilon}, {"theta", theta}, {"theta_c", theta_c}};
    p.reports_energy = true;
    p.reaction = [theta, theta_c](const ReactionArgs& args, std::span<double> out) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = fh_reaction(args.u[i], theta, theta_c);
    };
    p.initial = [seed](const Grid& grid) {
        return PhysicalField(grid, seeded_uniform(grid.total(), -0.9, 0.9, seed));
    };
    return p;
}

Problem heat_problem(int dims, double diffusion) {
    Problem p;
    p.name = "heat";
    p.domain = DomainSpec::cube(dims, 0.0, 2.0 * kPi, diffusion);
    p.domain.validate();
    p.params = {{"dims", dims}, {"D", diffusion}};
    p.exact = [dims, diffusion](double t, std::span<const double> x) {
        double v = std::exp(-dims * diffusion * t);
        for (double xi : x) v *= std::sin(xi);
        return v;
    };
    return p;
}

Problem make_problem(const std::string& name, const ParamMap& params, std::uint64_t seed) {
    auto allow = [&](std::initializer_list<const char*> keys) {
        for (const auto& [k, v] : params) {
            if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
                throw ConfigError("parameter '" + k + "' is not used by problem '" + name + "'");
        }
    };
    if (name == "example1") {
        allow({});
        return example1();
    }
    if (name == "mcf") {
        allow({"epsilon", "dims"});
        return example_mcf(param_or(params, "epsilon", 0.075), static_cast<int>(param_or(params, "dims", 2)));
    }
    if (name == "burgers") {
        allow({"epsilon", "advective"});
        const auto form = param_or(params, "advective", 0.0) != 0.0 ? BurgersForm::advective
                                                                     : BurgersForm::conservative;
        return example_burgers(param_or(params, "epsilon", 0.1), form);
    }
    if (name == "fh") {
        allow({"epsilon", "theta", "theta_c"});
        return example_fh(param_or(params, "epsilon", 0.1), param_or(params, "theta", 0.8),
                          param_or(params, "theta_c", 1.6), seed);
    }
    if (name == "heat") {
        allow({"dims", "D"});
        return heat_problem(static_cast<int>(param_or(params, "dims", 1)), param_or(params, "D", 1.0));
    }
    throw ConfigError("unknown problem '" + name + "'");
}

std::vector<double> seeded_uniform(std::size_t count, double lo, double hi, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::vector<double> out(count);
    for (auto& v : out) {
        const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        v = lo + (hi - lo) * unit;
    }
    return out;
}

}  // namespace eifg
