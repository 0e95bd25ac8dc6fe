#include "eifg/phi.hpp"

#include <array>
#include <cmath>
#include <string>

#include "eifg/error.hpp"

namespace eifg {

namespace {

constexpr std::array<double, 5> kInvFactorial{1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};

double phi_series(int j, double z) {
    // sum_{m>=0} z^m / (m+j)!
    double term = kInvFactorial[j];
    double sum = term;
    for (int m = 1; m <= 30; ++m) {
        term *= z / static_cast<double>(m + j);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

void check_args(int j, double z) {
    if (j < 0 || j > kMaxPhiIndex)
        throw ConfigError("phi index " + std::to_string(j) + " is not supported (0..3)");
    if (!(z <= 0.0)) throw NumericError("phi functions are only evaluated for z <= 0");
}

}  // namespace

void phi_all(double z, std::span<double, kMaxPhiIndex + 1> out) {
    check_args(0, z);
    if (std::abs(z) < 0.5) {
        for (int j = 0; j <= kMaxPhiIndex; ++j) out[j] = phi_series(j, z);
        return;
    }
    out[0] = std::exp(z);
    out[1] = std::expm1(z) / z;
    for (int j = 1; j < kMaxPhiIndex; ++j) out[j + 1] = (out[j] - kInvFactorial[j]) / z;
}

double phi(int j, double z) {
    check_args(j, z);
    std::array<double, kMaxPhiIndex + 1> v{};
    phi_all(z, v);
    return v[j];
}

double PhiCombo::at_zero() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.coeff * kInvFactorial[t.index];
    return s;
}

double PhiCombo::operator()(double tau_lambda) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.coeff * phi(t.index, -t.node_scale * tau_lambda);
    return s;
}

std::vector<double> eval_combo(const PhiCombo& combo, double tau, const Symbol& symbol) {
    if (!(tau > 0.0)) throw ConfigError("step size must be positive");
    for (const auto& t : combo.terms) {
        if (t.index < 0 || t.index > kMaxPhiIndex)
            throw ConfigError("phi index " + std::to_string(t.index) + " is not supported (0..3)");
    }
    std::vector<double> out(symbol.values.size());
    // Group evaluations by node scale so each phi_all call serves several terms.
    std::array<double, kMaxPhiIndex + 1> v{};
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double lambda = symbol.values[k];
        if (!(lambda >= 0.0)) throw NumericError("symbol entries must be nonnegative");
        double s = 0.0;
        double last_scale = -1.0;
        for (const auto& t : combo.terms) {
            if (t.node_scale != last_scale) {
                phi_all(-t.node_scale * tau * lambda, v);
                last_scale = t.node_scale;
            }
            s += t.coeff * v[t.index];
        }
        out[k] = s;
    }
    return out;
}

Scheme parse_scheme(std::string_view name) {
    if (name == "eifg1") return Scheme::eifg1;
    if (name == "eifg2") return Scheme::eifg2;
    if (name == "eifg3") return Scheme::eifg3;
    throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

const char* to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::eifg1: return "eifg1";
        case Scheme::eifg2: return "eifg2";
        case Scheme::eifg3: return "eifg3";
    }
    return "?";
}

int Tableau::order() const {
    switch (scheme) {
        case Scheme::eifg1: return 1;
        case Scheme::eifg2: return 2;
        case Scheme::eifg3: return 3;
    }
    return 0;
}

Tableau tableau(Scheme scheme, double c2) {
    Tableau t;
    t.scheme = scheme;
    auto lower = [&](int s) {
        t.stages = s;
        t.a.assign(s, std::vector<PhiCombo>(s));
        t.b.assign(s, PhiCombo{});
    };

    switch (scheme) {
        case Scheme::eifg1:
            lower(1);
            t.nodes = {0.0};
            t.b[0] = {{{1.0, 1, 1.0}}};
            break;
        case Scheme::eifg2:
            if (!(c2 > 0.0 && c2 <= 1.0)) throw ConfigError("c2 must lie in (0, 1]");
            lower(2);
            t.nodes = {0.0, c2};
            t.a[1][0] = {{{c2, 1, c2}}};
            t.b[0] = {{{1.0, 1, 1.0}, {-1.0 / c2, 2, 1.0}}};
            t.b[1] = {{{1.0 / c2, 2, 1.0}}};
            break;
        case Scheme::eifg3:
            // Krogstad's four-stage tableau, nodes (0, 1/2, 1/2, 1).
            lower(4);
            t.nodes = {0.0, 0.5, 0.5, 1.0};
            t.a[1][0] = {{{0.5, 1, 0.5}}};
            t.a[2][0] = {{{0.5, 1, 0.5}, {-1.0, 2, 0.5}}};
            t.a[2][1] = {{{1.0, 2, 0.5}}};
            t.a[3][0] = {{{1.0, 1, 1.0}, {-2.0, 2, 1.0}}};
            t.a[3][2] = {{{2.0, 2, 1.0}}};
            t.b[0] = {{{1.0, 1, 1.0}, {-3.0, 2, 1.0}, {4.0, 3, 1.0}}};
            t.b[1] = {{{2.0, 2, 1.0}, {-4.0, 3, 1.0}}};
            t.b[2] = {{{2.0, 2, 1.0}, {-4.0, 3, 1.0}}};
            t.b[3] = {{{-1.0, 2, 1.0}, {4.0, 3, 1.0}}};
            break;
    }
    return t;
}

}  // namespace eifg
