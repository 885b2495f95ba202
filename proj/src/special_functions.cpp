#include "covertfas/special_functions.hpp"

#include "covertfas/errors.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace covertfas {

namespace {

using Policy = boost::math::policies::policy<boost::math::policies::promote_double<false>>;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nu(double nu, const char* who) {
    if (!(nu > 0.0)) throw DomainError(std::string(who) + ": degrees of freedom must be > 0");
}

} // namespace

double bessel_j0(double x) {
    if (!std::isfinite(x)) throw DomainError("bessel_j0: non-finite argument");
    return boost::math::cyl_bessel_j(0, std::abs(x), Policy());
}

double sinc(double x) {
    if (!std::isfinite(x)) throw DomainError("sinc: non-finite argument");
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double student_t_cdf(double x, double nu) {
    require_nu(nu, "student_t_cdf");
    if (std::isnan(x)) throw DomainError("student_t_cdf: NaN argument");
    if (x == kInf) return 1.0;
    if (x == -kInf) return 0.0;
    return boost::math::cdf(boost::math::students_t_distribution<double, Policy>(nu), x);
}

double student_t_quantile(double p, double nu) {
    require_nu(nu, "student_t_quantile");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("student_t_quantile: p outside [0,1]");
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;
    if (p == 0.5) return 0.0;
    const boost::math::students_t_distribution<double, Policy> dist(nu);
    // 1 - p is exact for p > 0.5, so solving in the lower tail loses nothing.
    if (p > 0.5) return -boost::math::quantile(dist, 1.0 - p);
    return boost::math::quantile(dist, p);
}

double normal_cdf(double x) {
    if (std::isnan(x)) throw DomainError("normal_cdf: NaN argument");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("normal_quantile: p outside [0,1]");
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p, Policy());
}

} // namespace covertfas
