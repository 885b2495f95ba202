#pragma once

// Scalar special functions used by the copula expressions.

namespace covertfas {

/// Cylindrical Bessel function of the first kind, order zero.
double bessel_j0(double x);

/// sin(x)/x with the removable singularity filled in.
double sinc(double x);

/// Univariate Student-t CDF. Accepts +-infinity; nu may be non-integer.
double student_t_cdf(double x, double nu);

/// Inverse of student_t_cdf. p = 0 and p = 1 map to -inf and +inf.
double student_t_quantile(double p, double nu);

double normal_cdf(double x);
double normal_quantile(double p);

} // namespace covertfas
