#pragma once

#include "covertfas/port_geometry.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace covertfas {

/// Degrees of freedom plus dependence matrix of a t-student copula.
struct CopulaSpec {
    double nu = 40.0;
    CorrelationMatrix sigma;

    void validate() const;
};

struct QmcSettings {
    double target_abs_error = 1e-4;
    std::uint64_t max_points = std::uint64_t{1} << 20;
    int shifts = 12;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Probability with the integrator's absolute error estimate attached.
struct MetricValue {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    // False when the integrator ran out of points before meeting its target.
    bool reached_target = true;
};

/// Lower-triangular L with L * L^T = sigma. Pivots that round slightly below
/// zero on a semidefinite input are clamped; a pivot below -1e-8 throws
/// NumericalError.
Eigen::MatrixXd cholesky_psd(const CorrelationMatrix& sigma);

/// P(X1 <= b1, X2 <= b2) for a standard bivariate t with correlation rho.
/// One-dimensional adaptive quadrature over the conditional t law.
MetricValue bivariate_t_cdf(double b1, double b2, double rho, double nu);

/// P(X <= upper) for X ~ multivariate t(nu, sigma). Dimensions 1 and 2 are
/// evaluated by quadrature; higher dimensions by the separation-of-variables
/// transform integrated with randomly shifted rank-1 lattice rules. The error
/// estimate is three standard errors across the shifts.
MetricValue mvt_cdf(std::span<const double> upper, const CopulaSpec& spec,
                    const QmcSettings& settings = {});

/// Same limit broadcast to every coordinate.
MetricValue mvt_cdf(double upper, const CopulaSpec& spec, const QmcSettings& settings = {});

} // namespace covertfas
