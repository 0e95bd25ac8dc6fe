#include <cmath>
#include <numbers>

#include "doctest.h"
#include "eifg/diagnostics.hpp"
#include "eifg/error.hpp"
#include "eifg/integrator.hpp"
#include "eifg/spectral.hpp"

using namespace eifg;
using std::numbers::pi;

namespace {

PhysicalField sine_field(const Grid& g) {
    PhysicalField u(g);
    for (std::size_t j = 0; j < g.total(); ++j) u[j] = std::sin(g.nodes(0)[j]);
    return u;
}

}  // namespace

TEST_CASE("sobolev norm examples") {
    auto cube = build_grid(DomainSpec::cube(3, 0, 1), {4, 4, 4});
    PhysicalField one(cube, std::vector<double>(64, 1.0));
    CHECK(sobolev_norm(forward(one), 2) == doctest::Approx(1.0).epsilon(1e-15));

    auto g = build_grid(DomainSpec::cube(1, 0, 2 * pi), {16});
    auto s_hat = forward(sine_field(g));
    CHECK(sobolev_norm(s_hat, 0) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK(sobolev_norm(s_hat, 1) == doctest::Approx(std::sqrt(2 * pi)).epsilon(1e-14));
    CHECK(sobolev_norm(s_hat, 2) == doctest::Approx(std::sqrt(4 * pi)).epsilon(1e-14));
}

TEST_CASE("sobolev norms agree with quadrature and increase with s") {
    auto g = build_grid(DomainSpec::cube(2, 0, 1.3), {12, 10});
    PhysicalField u(g, seeded_uniform(g.total(), -1, 1, 17));
    double quad = 0;
    for (double v : u.values()) quad += v * v;
    quad = std::sqrt(quad * g.cell_volume());
    auto u_hat = forward(u);
    CHECK(sobolev_norm(u_hat, 0) == doctest::Approx(quad).epsilon(1e-13));
    CHECK(sobolev_norm(u_hat, 0) <= sobolev_norm(u_hat, 1));
    CHECK(sobolev_norm(u_hat, 1) <= sobolev_norm(u_hat, 2));
}

TEST_CASE("error norms") {
    auto g = build_grid(DomainSpec::cube(1, 0, 2 * pi), {16});
    auto u = sine_field(g);
    PhysicalField zero(g);
    auto nodal = error_norms(u, zero);
    CHECK(nodal.e0 == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK(nodal.e1 == doctest::Approx(std::sqrt(2 * pi)).epsilon(1e-14));

    // a resolved exact solution gives the same result either way
    auto exact = [](double, std::span<const double> x) { return 0.0 * x[0]; };
    auto cont = error_norms(forward(u), exact, 0.0, 2);
    CHECK(cont.e0 == doctest::Approx(nodal.e0).epsilon(1e-13));
    CHECK(cont.e2 == doctest::Approx(nodal.e2).epsilon(1e-13));

    // an unresolved mode aliases to zero at the nodes but is caught on the refined grid
    auto high = [](double, std::span<const double> x) { return std::sin(8 * x[0]); };
    PhysicalField zero_num(g);
    auto missed = error_norms(forward(zero_num), high, 0.0, 1);
    auto caught = error_norms(forward(zero_num), high, 0.0, 2);
    CHECK(missed.e0 < 1e-12);
    CHECK(caught.e0 == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));

    auto fine = build_grid(g.domain(), {32});
    PhysicalField uf(fine);
    for (std::size_t j = 0; j < 32; ++j) uf[j] = std::sin(fine.nodes(0)[j]);
    auto vs_ref = error_norms(forward(u), forward(uf));
    CHECK(vs_ref.e0 < 1e-14);
    CHECK(refined_grid(g, 3).size(0) == 48);
}

TEST_CASE("observed rates") {
    CHECK(*observed_rate(1e-2, 2.5e-3, 2) == doctest::Approx(2.0));
    CHECK(*observed_rate(8e-5, 1e-5, 2) == doctest::Approx(3.0));
    CHECK(std::round(*observed_rate(7.8049e-8, 3.6115e-9, 2) * 100) / 100 == doctest::Approx(4.43));
    CHECK_FALSE(observed_rate(0.0, 1e-3, 2).has_value());
    CHECK_FALSE(observed_rate(1e-3, 0.0, 2).has_value());
    CHECK_FALSE(observed_rate(NAN, 1e-3, 2).has_value());

    Resolution a{{8, 8}, 10}, b{{16, 16}, 10}, c{{16, 16}, 20}, d{{32, 32}, 40};
    CHECK(*refinement_ratio(a, b) == doctest::Approx(2.0));
    CHECK(*refinement_ratio(b, c) == doctest::Approx(2.0));
    CHECK_FALSE(refinement_ratio(c, d).has_value());
    CHECK_FALSE(refinement_ratio(a, a).has_value());
    Resolution e{{16, 8}, 10};
    CHECK(*refinement_ratio(a, e) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("rate table") {
    std::vector<ErrorRecord> recs{
        {{{8}, 4}, {1e-2, 1e-1, 1.0}, 0.0},
        {{{8}, 8}, {2.5e-3, 5e-2, 0.5}, 0.0},
        {{{8}, 16}, {0.0, 2.5e-2, 0.25}, 0.0},
    };
    auto t = rates(recs);
    REQUIRE(t.rows.size() == 3);
    CHECK_FALSE(t.rows[0].cr0.has_value());
    CHECK(*t.rows[1].cr0 == doctest::Approx(2.0));
    CHECK(*t.rows[1].cr1 == doctest::Approx(1.0));
    CHECK_FALSE(t.rows[2].cr0.has_value());
    CHECK(*t.rows[2].cr2 == doctest::Approx(1.0));

    auto single = rates({recs[0]});
    CHECK(single.rows.size() == 1);
    CHECK_FALSE(single.rows[0].cr0.has_value());

    std::vector<ErrorRecord> backwards{recs[1], recs[0]};
    CHECK_THROWS_AS(rates(backwards), ConfigError);
}

TEST_CASE("least-squares slope") {
    std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    CHECK(lsq_slope(x, y) == doctest::Approx(2.0));
    std::vector<double> y2{0, 1, 1, 2};
    CHECK(lsq_slope(x, y2) == doctest::Approx(0.6));
}

TEST_CASE("interface radius") {
    auto g = build_grid(DomainSpec::cube(2, -0.5, 0.5), {64, 64});
    PhysicalField minus(g, std::vector<double>(g.total(), -1.0));
    auto none = interface_radius(minus);
    CHECK(none.collapsed);
    CHECK(none.radius == 0.0);

    PhysicalField plus(g, std::vector<double>(g.total(), 1.0));
    CHECK(interface_radius(plus).radius == doctest::Approx(std::sqrt(1.0 / pi)).epsilon(1e-14));

    auto fine = build_grid(DomainSpec::cube(2, -0.5, 0.5), {1024, 1024});
    PhysicalField tanh_u(fine);
    long inside = 0;
    for (std::size_t i = 0; i < 1024; ++i)
        for (std::size_t j = 0; j < 1024; ++j) {
            double r = std::hypot(fine.nodes(0)[i], fine.nodes(1)[j]);
            tanh_u[i * 1024 + j] = std::tanh((0.4 - r) / (std::numbers::sqrt2 * 0.01));
            if (r < 0.4) ++inside;
        }
    auto est = interface_radius(tanh_u);
    CHECK_FALSE(est.collapsed);
    CHECK(est.radius == doctest::Approx(std::sqrt(inside * fine.cell_volume() / pi)).epsilon(1e-14));
    CHECK(std::abs(est.radius - 0.4) <= 0.002);

    auto g3 = build_grid(DomainSpec::cube(3, -0.5, 0.5), {64, 64, 64});
    PhysicalField ball(g3);
    for (std::size_t i = 0; i < 64; ++i)
        for (std::size_t j = 0; j < 64; ++j)
            for (std::size_t l = 0; l < 64; ++l) {
                double r = std::sqrt(std::pow(g3.nodes(0)[i], 2) + std::pow(g3.nodes(1)[j], 2) +
                                     std::pow(g3.nodes(2)[l], 2));
                ball[(i * 64 + j) * 64 + l] = 0.3 - r;
            }
    CHECK(std::abs(interface_radius(ball).radius - 0.3) < 0.01);

    auto g1 = build_grid(DomainSpec::cube(1, 0, 1), {8});
    CHECK_THROWS_AS(interface_radius(PhysicalField(g1)), ConfigError);
}

TEST_CASE("flory-huggins energy") {
    const double theta = 0.8, theta_c = 1.6, eps = 0.1;
    CHECK(fh_bulk_density(0.0, theta, theta_c) == 0.0);
    double u = 0.5;
    double want = 0.4 * (1.5 * std::log(1.5) + 0.5 * std::log(0.5)) - 0.8 * 0.25;
    CHECK(fh_bulk_density(u, theta, theta_c) == doctest::Approx(want).epsilon(1e-15));
    CHECK(fh_bulk_density(-u, theta, theta_c) == fh_bulk_density(u, theta, theta_c));
    CHECK(std::isfinite(fh_bulk_density(1.0, theta, theta_c)));

    auto g = build_grid(DomainSpec::cube(3, 0, 1), {8, 8, 8});
    CHECK(fh_energy(PhysicalField(g), eps, theta, theta_c) == 0.0);
    PhysicalField c(g, std::vector<double>(g.total(), u));
    CHECK(fh_energy(c, eps, theta, theta_c) == doctest::Approx(want).epsilon(1e-13));

    auto p = example_fh(eps, theta, theta_c, 99);
    auto gp = build_grid(p.domain, {16, 16, 16});
    double prev = INFINITY;
    IntegrateOptions opt;
    opt.observer_stride = 1;
    opt.observer = [&](long, double, const State& s) {
        double e = fh_energy(inverse(s.field), eps, theta, theta_c);
        CHECK(e <= prev);
        prev = e;
    };
    integrate(p.initial_field(gp), 0.2, 20, tableau(Scheme::eifg2), p, opt);
}

TEST_CASE("sup norm") {
    auto g = build_grid(DomainSpec::cube(1, 0, 2 * pi), {4});
    CHECK(sup_norm(PhysicalField(g)) == 0.0);
    CHECK(sup_norm(sine_field(g)) == doctest::Approx(1.0));
    CHECK(sup_norm(PhysicalField(g, {0.1, -3.0, 2.0, 0.0})) == 3.0);
}
