#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "eifg/grid.hpp"

namespace eifg {

/// Highest phi index used by the shipped tableaux.
inline constexpr int kMaxPhiIndex = 3;

/// phi_0(z) = e^z, phi_{j+1}(z) = (phi_j(z) - 1/j!)/z, for j <= 3 and z <= 0.
///
/// Small arguments (|z| < 1/2) use the Taylor series sum_m z^m/(m+j)!; larger
/// ones use e^z followed by the upward recurrence, which does not cancel
/// catastrophically on the negative half-line.
double phi(int j, double z);

/// Evaluates phi_0..phi_3 at one argument into `out` (size kMaxPhiIndex+1).
void phi_all(double z, std::span<double, kMaxPhiIndex + 1> out);

/// One term coeff * phi_j(-c * tau * lambda).
struct PhiTerm {
    double coeff = 1.0;
    int index = 1;
    double node_scale = 1.0;
};

/// Linear combination of phi functions at scaled arguments.
struct PhiCombo {
    std::vector<PhiTerm> terms;

    bool empty() const { return terms.empty(); }
    /// Value at lambda = 0, i.e. sum coeff / index!.
    double at_zero() const;
    double operator()(double tau_lambda) const;
};

/// Entrywise combo(-tau * symbol).
std::vector<double> eval_combo(const PhiCombo& combo, double tau, const Symbol& symbol);

enum class Scheme { eifg1, eifg2, eifg3 };

Scheme parse_scheme(std::string_view name);
const char* to_string(Scheme scheme);

/// Explicit exponential Runge-Kutta coefficients in phi-combination form.
/// `a[i][j]` is defined for j < i; entries for j >= i are empty.
struct Tableau {
    Scheme scheme = Scheme::eifg1;
    int stages = 1;
    std::vector<double> nodes;
    std::vector<std::vector<PhiCombo>> a;
    std::vector<PhiCombo> b;

    /// Nominal temporal order.
    int order() const;
};

/// c2 in (0,1] is used by eifg2 only.
Tableau tableau(Scheme scheme, double c2 = 0.5);

}  // namespace eifg
