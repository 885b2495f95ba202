#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library's numerical paths.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

// J0 by its ascending series, summed in long double until terms vanish.
inline double bessel_j0_series(double x) {
    const long double q = -(static_cast<long double>(x) * x) / 4.0L;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        sum += term;
        if (std::fabs(term) < 1e-22L * std::fabs(sum) && k > 5) break;
    }
    return static_cast<double>(sum);
}

// Root of f in [lo, hi] by bisection.
template <class F>
double bisect(F&& f, double lo, double hi, int iterations = 200) {
    double flo = f(lo);
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline long double t_pdf(long double x, long double nu) {
    const long double log_c = std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2) -
                              0.5L * std::log(nu * std::numbers::pi_v<long double>);
    return std::exp(log_c - (nu + 1) / 2 * std::log1p(x * x / nu));
}

// t CDF by composite 10-point Gauss-Legendre on [0, |x|]. Finite x only.
inline double t_cdf_quadrature(double x, double nu, int panels = 4000) {
    static constexpr long double nodes[] = {0.1488743389816312108848260L, 0.4333953941292471907992659L,
                                            0.6794095682990244062343274L, 0.8650633666889845107320967L,
                                            0.9739065285171717200779640L};
    static constexpr long double weights[] = {0.2955242247147528701738930L, 0.2692667193099963550912269L,
                                              0.2190863625159820439955349L, 0.1494513491505805931457763L,
                                              0.0666713443086881375935688L};
    const long double a = std::fabs(static_cast<long double>(x));
    const long double h = a / panels;
    long double sum = 0.0L;
    for (int p = 0; p < panels; ++p) {
        const long double mid = (p + 0.5L) * h, half = 0.5L * h;
        for (int i = 0; i < 5; ++i)
            sum += weights[i] * half * (t_pdf(mid - half * nodes[i], nu) + t_pdf(mid + half * nodes[i], nu));
    }
    const long double upper = 0.5L + sum;
    return static_cast<double>(x >= 0 ? upper : 1.0L - upper);
}

// Plain Monte Carlo estimate of P(X <= b), X ~ multivariate t(nu, sigma).
inline double mvt_cdf_sampling(const std::vector<double>& b, const Eigen::MatrixXd& sigma,
                               double nu, long samples, unsigned seed) {
    const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(sigma).matrixL();
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    std::chi_squared_distribution<double> chi2(nu);
    const auto d = static_cast<Eigen::Index>(b.size());
    Eigen::VectorXd z(d);
    long hits = 0;
    for (long s = 0; s < samples; ++s) {
        for (Eigen::Index i = 0; i < d; ++i) z(i) = normal(gen);
        const Eigen::VectorXd x = l * z / std::sqrt(chi2(gen) / nu);
        bool inside = true;
        for (Eigen::Index i = 0; i < d && inside; ++i) inside = x(i) <= b[i];
        hits += inside;
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

// Random correlation matrix from normalized Gram of a random factor.
inline Eigen::MatrixXd random_correlation(int dim, std::mt19937_64& gen) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd a(dim, dim + 2);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = normal(gen);
    Eigen::MatrixXd s = a * a.transpose();
    const Eigen::VectorXd inv = s.diagonal().cwiseSqrt().cwiseInverse();
    s = inv.asDiagonal() * s * inv.asDiagonal();
    s.diagonal().setOnes();
    return s;
}

} // namespace oracle
