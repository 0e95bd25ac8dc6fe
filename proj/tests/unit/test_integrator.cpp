#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>

#include "doctest.h"
#include "eifg/diagnostics.hpp"
#include "eifg/error.hpp"
#include "eifg/integrator.hpp"
#include "eifg/spectral.hpp"
#include "oracles.hpp"

using namespace eifg;
using std::numbers::pi;

namespace {

Problem with_reaction(Problem p, ReactionFn f) {
    p.reaction = std::move(f);
    p.exact = nullptr;
    return p;
}

// u_t = u_xx + u - u^3 on [0, 2pi], N = 8
Problem cubic_problem() {
    Problem p = heat_problem(1);
    return with_reaction(p, [](const ReactionArgs& a, std::span<double> out) {
        for (std::size_t i = 0; i < a.u.size(); ++i) out[i] = a.u[i] - a.u[i] * a.u[i] * a.u[i];
    });
}

using CVec = std::vector<std::complex<double>>;

// Independent step: naive DFT, high-precision phi, formulas written out per scheme.
CVec oracle_step(const Grid& g, const CVec& u, double tau, Scheme scheme) {
    const std::size_t n = g.total();
    std::vector<double> lam(n);
    for (std::size_t k = 0; k < n; ++k) lam[k] = std::pow(g.wavenumbers(0)[k], 2);

    auto synth = [&](const CVec& c) {
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j) {
            std::complex<double> acc = 0;
            for (std::size_t k = 0; k < n; ++k) {
                double kk = g.wavenumbers(0)[k];
                if (Grid::mode_index(k, n) == -static_cast<long>(n) / 2) {
                    acc += c[k] * std::cos(kk * g.nodes(0)[j]);  // real part of the unpaired mode
                } else {
                    acc += c[k] * std::exp(std::complex<double>(0, kk * g.nodes(0)[j]));
                }
            }
            x[j] = acc.real();
        }
        return x;
    };
    auto G = [&](const CVec& c) {
        auto x = synth(c);
        for (double& v : x) v = v - v * v * v;
        return oracle::dft(g, x);
    };
    auto ph = [&](int j, double c, std::size_t k) { return oracle::phi(j, -c * tau * lam[k]); };

    CVec out(n);
    if (scheme == Scheme::eifg2) {
        const double c2 = 0.5;
        auto g1 = G(u);
        CVec u2(n);
        for (std::size_t k = 0; k < n; ++k) u2[k] = std::exp(-c2 * tau * lam[k]) * u[k] + tau * c2 * ph(1, c2, k) * g1[k];
        auto g2 = G(u2);
        for (std::size_t k = 0; k < n; ++k) {
            double b2 = ph(2, 1, k) / c2;
            double b1 = ph(1, 1, k) - b2;
            out[k] = std::exp(-tau * lam[k]) * u[k] + tau * (b1 * g1[k] + b2 * g2[k]);
        }
    } else {
        auto g1 = G(u);
        CVec u2(n), u3(n), u4(n);
        for (std::size_t k = 0; k < n; ++k) u2[k] = std::exp(-0.5 * tau * lam[k]) * u[k] + tau * 0.5 * ph(1, 0.5, k) * g1[k];
        auto g2 = G(u2);
        for (std::size_t k = 0; k < n; ++k)
            u3[k] = std::exp(-0.5 * tau * lam[k]) * u[k] +
                    tau * ((0.5 * ph(1, 0.5, k) - ph(2, 0.5, k)) * g1[k] + ph(2, 0.5, k) * g2[k]);
        auto g3 = G(u3);
        for (std::size_t k = 0; k < n; ++k)
            u4[k] = std::exp(-tau * lam[k]) * u[k] +
                    tau * ((ph(1, 1, k) - 2 * ph(2, 1, k)) * g1[k] + 2 * ph(2, 1, k) * g3[k]);
        auto g4 = G(u4);
        for (std::size_t k = 0; k < n; ++k) {
            double p1 = ph(1, 1, k), p2 = ph(2, 1, k), p3 = ph(3, 1, k);
            out[k] = std::exp(-tau * lam[k]) * u[k] +
                     tau * ((p1 - 3 * p2 + 4 * p3) * g1[k] + (2 * p2 - 4 * p3) * (g2[k] + g3[k]) +
                            (4 * p3 - p2) * g4[k]);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("linear part is integrated exactly") {
    auto g = build_grid(DomainSpec::cube(1, 0, 2 * pi), {8});
    for (Scheme s : {Scheme::eifg1, Scheme::eifg2, Scheme::eifg3}) {
        SpectralField u(g);
        u[2] = 0.5;
        u[6] = 0.5;  // cos(2x), lambda = 4
        State st{0.0, u, 0};
        Integrator integ(g, heat_problem(1), tableau(s));
        integ.step(st, 0.25);
        CHECK(st.field[2].real() == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-15));
        CHECK(st.time == 0.25);
        CHECK(st.step == 1);
    }
}

TEST_CASE("constant forcing with eifg1") {
    auto g = build_grid(DomainSpec::cube(1, 0, 2 * pi), {8});
    auto p = with_reaction(heat_problem(1), [](const ReactionArgs&, std::span<double> out) {
        std::fill(out.begin(), out.end(), 1.0);
    });
    SpectralField u(g);
    u[0] = 2.0;
    State st{0.0, u, 0};
    Integrator(g, p, tableau(Scheme::eifg1)).step(st, 0.1);
    CHECK(st.field[0].real() == doctest::Approx(2.1).epsilon(1e-15));
}

TEST_CASE("forced unit-rate mode after one eifg1 step is phi_1(-1)") {
    auto g = build_grid(DomainSpec::cube(1, 0, 2 * pi), {8});
    auto p = with_reaction(heat_problem(1), [](const ReactionArgs& a, std::span<double> out) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::cos(a.grid.nodes(0)[i]);
    });
    State st{0.0, SpectralField(g), 0};
    Integrator(g, p, tableau(Scheme::eifg1)).step(st, 1.0);
    auto u = inverse(st.field);
    CHECK(u[0] == doctest::Approx(0.632120558828558).epsilon(1e-14));
}

TEST_CASE("heat equation is solved to round-off") {
    for (int dims : {1, 2, 3}) {
        auto p = heat_problem(dims, 0.7);
        auto g = build_grid(p.domain, std::vector<std::size_t>(dims, 8));
        auto u0 = p.initial_field(g);
        for (long n : {1L, 3L, 10L}) {
            auto st = integrate(u0, 1.0, n, tableau(Scheme::eifg3), p);
            CHECK(st.time == 1.0);
            auto u = inverse(st.field);
            auto ex = p.sample_exact(g, 1.0);
            for (std::size_t i = 0; i < g.total(); ++i) CHECK(std::abs(u[i] - ex[i]) < 1e-13);
        }
    }
}

TEST_CASE("mean is conserved without reaction") {
    auto g = build_grid(DomainSpec::cube(2, 0, 1), {8, 8});
    Problem p;
    p.name = "diffusion";
    p.domain = g.domain();
    PhysicalField u0(g, seeded_uniform(g.total(), -1, 1, 4));
    auto m0 = forward(u0)[0];
    auto st = integrate(u0, 0.5, 7, tableau(Scheme::eifg2), p);
    CHECK(std::abs(st.field[0] - m0) < 1e-15);
}

TEST_CASE("steps agree with an independent implementation") {
    auto g = build_grid(DomainSpec::cube(1, 0, 2 * pi), {8});
    auto p = cubic_problem();
    PhysicalField u0(g);
    for (std::size_t j = 0; j < 8; ++j) u0[j] = 0.4 + 0.3 * std::sin(g.nodes(0)[j]) + 0.2 * std::cos(3 * g.nodes(0)[j]);
    for (Scheme s : {Scheme::eifg2, Scheme::eifg3})
        for (double tau : {0.05, 0.4}) {
            State st{0.0, forward(u0), 0};
            Integrator(g, p, tableau(s)).step(st, tau);
            CVec u(st.field.size());
            auto start = forward(u0);
            for (std::size_t k = 0; k < u.size(); ++k) u[k] = start[k];
            auto want = oracle_step(g, u, tau, s);
            for (std::size_t k = 0; k < u.size(); ++k) CHECK(std::abs(st.field[k] - want[k]) < 1e-14);
        }
}

TEST_CASE("temporal order on the stiff manufactured problem") {
    // errors against a fine-step run on the same grid, so only the time error is seen
    auto p = example1();
    auto g = build_grid(p.domain, {16, 16, 16});
    auto u0 = p.initial_field(g);
    auto ref = integrate(u0, 1.0, 1024, tableau(Scheme::eifg3), p).field;
    struct Expect {
        Scheme scheme;
        double slope, tol;
    };
    for (auto [s, want, tol] : {Expect{Scheme::eifg1, 1.0, 0.25}, Expect{Scheme::eifg2, 2.0, 0.25},
                                Expect{Scheme::eifg3, 3.0, 0.4}}) {
        std::vector<double> log_dt, log_e;
        for (long n : {4L, 8L, 16L, 32L}) {
            auto st = integrate(u0, 1.0, n, tableau(s), p);
            log_dt.push_back(std::log(1.0 / static_cast<double>(n)));
            log_e.push_back(std::log(error_norms(st.field, ref).e1));
        }
        double slope = lsq_slope(log_dt, log_e);
        INFO(to_string(s) << " slope " << slope);
        CHECK(std::abs(slope - want) <= tol);
    }
}

TEST_CASE("repeated runs are bit-identical") {
    auto p = example_burgers(0.1);
    auto u0 = p.initial_field(build_grid(p.domain, {8, 6, 4}));
    auto a = integrate(u0, 0.5, 5, tableau(Scheme::eifg3), p);
    auto b = integrate(u0, 0.5, 5, tableau(Scheme::eifg3), p);
    CHECK(std::memcmp(a.field.coeffs().data(), b.field.coeffs().data(), a.field.size() * sizeof(Complex)) == 0);
}

TEST_CASE("blow-up is reported with the step index") {
    auto g = build_grid(DomainSpec::cube(1, 0, 2 * pi), {8});
    auto p = with_reaction(heat_problem(1), [](const ReactionArgs&, std::span<double> out) {
        std::fill(out.begin(), out.end(), 1e150);
    });
    auto u0 = PhysicalField(g);
    try {
        integrate(u0, 1.0, 4, tableau(Scheme::eifg1), p);
        FAIL("expected blow-up");
    } catch (const BlowUpError& e) {
        CHECK(e.step() == 0);
        CHECK(e.max_magnitude() > kBlowUpThreshold);
    }

    auto nan_p = with_reaction(heat_problem(1), [](const ReactionArgs&, std::span<double> out) {
        std::fill(out.begin(), out.end(), std::nan(""));
    });
    CHECK_THROWS_AS(integrate(u0, 1.0, 4, tableau(Scheme::eifg2), nan_p), NumericError);
}

TEST_CASE("observer cadence and argument checks") {
    auto g = build_grid(DomainSpec::cube(1, 0, 2 * pi), {8});
    auto p = heat_problem(1);
    std::vector<long> seen;
    IntegrateOptions opt;
    opt.observer_stride = 3;
    opt.observer = [&](long n, double, const State&) { seen.push_back(n); };
    integrate(p.initial_field(g), 1.0, 7, tableau(Scheme::eifg1), p, opt);
    CHECK(seen == std::vector<long>{0, 3, 6, 7});

    CHECK_THROWS_AS(integrate(p.initial_field(g), 1.0, 0, tableau(Scheme::eifg1), p), ConfigError);
    CHECK_THROWS_AS(integrate(p.initial_field(g), -1.0, 2, tableau(Scheme::eifg1), p), ConfigError);
    CHECK_THROWS_AS(StepPlan(g, tableau(Scheme::eifg1), 0.0), ConfigError);
}
