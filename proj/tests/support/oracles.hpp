#pragma once

// Reference computations used only by tests. They deliberately take the slow,
// direct route (high-precision series, naive DFT sums, finite differences) so
// they share no code path with the library.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "eifg/grid.hpp"

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_100;

/// phi_j(z) to ~100 digits: Taylor series for |z| <= 2, closed form
/// (e^z - sum_{m<j} z^m/m!)/z^j otherwise.
inline double phi(int j, double z_in) {
    const Big z = z_in;
    if (abs(z) <= 2) {
        Big fact = 1;
        for (int m = 2; m <= j; ++m) fact *= m;
        Big term = 1 / fact;
        Big sum = term;
        for (int m = 1; m < 400; ++m) {
            term *= z / (m + j);
            sum += term;
            if (abs(term) < Big("1e-90") * abs(sum)) break;
        }
        return static_cast<double>(sum);
    }
    Big partial = 0;
    Big term = 1;
    for (int m = 0; m < j; ++m) {
        partial += term;
        term *= z / (m + 1);
    }
    return static_cast<double>((exp(z) - partial) / pow(z, j));
}

/// Naive normalized DFT with coefficients referenced to the grid origin,
/// returned in DFT order.
inline std::vector<std::complex<double>> dft(const eifg::Grid& g, std::span<const double> u) {
    const int d = g.dims();
    std::vector<std::complex<double>> out(g.total());
    std::array<std::size_t, 3> n{1, 1, 1};
    for (int a = 0; a < d; ++a) n[a] = g.size(a);
    for (std::size_t k0 = 0; k0 < n[0]; ++k0)
        for (std::size_t k1 = 0; k1 < n[1]; ++k1)
            for (std::size_t k2 = 0; k2 < n[2]; ++k2) {
                std::complex<long double> acc = 0;
                for (std::size_t j0 = 0; j0 < n[0]; ++j0)
                    for (std::size_t j1 = 0; j1 < n[1]; ++j1)
                        for (std::size_t j2 = 0; j2 < n[2]; ++j2) {
                            long double phase = 0;
                            const std::array<std::size_t, 3> k{k0, k1, k2}, j{j0, j1, j2};
                            for (int a = 0; a < d; ++a) {
                                const long double kk = eifg::Grid::mode_index(k[a], n[a]);
                                phase += 2.0L * std::numbers::pi_v<long double> * kk * j[a] / n[a];
                            }
                            const double v = u[(j0 * n[1] + j1) * n[2] + j2];
                            acc += std::complex<long double>(v * std::cos(phase), -v * std::sin(phase));
                        }
                out[(k0 * n[1] + k1) * n[2] + k2] =
                    std::complex<double>(static_cast<double>(acc.real() / g.total()),
                                         static_cast<double>(acc.imag() / g.total()));
            }
    return out;
}

/// Fourth-order central second difference along one coordinate.
inline double d2(const std::function<double(std::array<double, 4>)>& f, std::array<double, 4> p, int coord,
                 double h) {
    auto at = [&](double s) {
        auto q = p;
        q[coord] += s * h;
        return f(q);
    };
    return (-at(2) + 16 * at(1) - 30 * at(0) + 16 * at(-1) - at(-2)) / (12 * h * h);
}

/// Fourth-order central first difference along one coordinate.
inline double d1(const std::function<double(std::array<double, 4>)>& f, std::array<double, 4> p, int coord,
                 double h) {
    auto at = [&](double s) {
        auto q = p;
        q[coord] += s * h;
        return f(q);
    };
    return (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h);
}

}  // namespace oracle
