#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "eifg/field.hpp"

namespace eifg {

/// sqrt(|Omega| sum_k (1+|k~|^2)^s |u^_k|^2) for s in {0,1,2}.
double sobolev_norm(const SpectralField& u_hat, int s);
double sobolev_norm(const Grid& grid, std::span<const Complex> coeffs, int s);

struct ErrorNorms {
    double e0 = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
};

/// Norms of (numeric - reference), differenced at the nodes then transformed.
ErrorNorms error_norms(const PhysicalField& numeric, const PhysicalField& reference);

/// Norms of the continuous error u_N - u_ref, where u_N is the trigonometric
/// interpolant of `numeric`. Both are compared on a grid refined by
/// `oversample` per axis, so the part of u_ref the grid cannot represent is
/// counted rather than aliased away. oversample = 1 reduces to nodal differencing.
ErrorNorms error_norms(const SpectralField& numeric, const std::function<double(double, std::span<const double>)>& exact,
                       double t, int oversample);

/// Same, against a reference solution computed on a grid at least as fine.
ErrorNorms error_norms(const SpectralField& numeric, const SpectralField& reference);

/// Grid with every size multiplied by `factor`.
Grid refined_grid(const Grid& grid, int factor);

/// Grid sizes and number of time steps of one run.
struct Resolution {
    std::vector<std::size_t> sizes;
    long n_steps = 0;

    double nodes() const;
};

struct ErrorRecord {
    Resolution resolution;
    ErrorNorms errors;
    double sec_per_step = 0.0;
};

struct RateRow {
    ErrorRecord record;
    // empty on the first row, or where the rate is undefined
    std::optional<double> cr0, cr1, cr2;
};

struct RateTable {
    std::vector<RateRow> rows;
};

/// log(coarse/fine)/log(ratio); empty when either error is zero or non-finite.
std::optional<double> observed_rate(double coarse, double fine, double ratio);

/// Refinement ratio between successive records refined in exactly one of
/// space or time; empty when both or neither changed.
std::optional<double> refinement_ratio(const Resolution& coarse, const Resolution& fine);

/// Observed convergence rates between successive records. Throws ConfigError
/// on a record that coarsens instead of refining.
RateTable rates(std::vector<ErrorRecord> records);

/// Least-squares slope of y against x.
double lsq_slope(std::span<const double> x, std::span<const double> y);

struct RadiusEstimate {
    double radius = 0.0;
    bool collapsed = false;
};

/// Radius of the region {u > 0} from its measure (circle for d = 2, sphere for d = 3).
RadiusEstimate interface_radius(const PhysicalField& u);

/// Flory-Huggins free energy with a uniform nodal quadrature.
double fh_energy(const PhysicalField& u, double epsilon, double theta, double theta_c);

/// Flory-Huggins bulk density (theta/2)((1+u)ln(1+u)+(1-u)ln(1-u)) - (theta_c/2) u^2.
double fh_bulk_density(double u, double theta, double theta_c);

double sup_norm(const PhysicalField& u);

}  // namespace eifg
