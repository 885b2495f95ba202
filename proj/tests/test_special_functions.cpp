#include "covertfas/errors.hpp"
#include "covertfas/special_functions.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace covertfas;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(BesselJ0, AgreesWithSeriesOracle) {
    EXPECT_EQ(bessel_j0(0.0), 1.0);
    for (double x = -12.0; x <= 12.0; x += 0.37) {
        EXPECT_NEAR(bessel_j0(x), oracle::bessel_j0_series(x), 1e-12) << "x=" << x;
        EXPECT_EQ(bessel_j0(x), bessel_j0(-x));
    }
    EXPECT_NEAR(bessel_j0(2 * std::numbers::pi), 0.220276908539934462, 1e-12);
}

TEST(BesselJ0, FirstZero) {
    const double root = oracle::bisect([](double x) { return oracle::bessel_j0_series(x); }, 2.0, 3.0);
    EXPECT_NEAR(root, 2.404825557695773, 1e-12);
    EXPECT_LT(std::abs(bessel_j0(2.404826)), 1e-5);
    EXPECT_LT(std::abs(bessel_j0(root)), 1e-13);
}

TEST(BesselJ0, RejectsNonFinite) {
    EXPECT_THROW(bessel_j0(kInf), DomainError);
    EXPECT_THROW(bessel_j0(std::nan("")), DomainError);
}

TEST(StudentT, CdfKnownValues) {
    for (double nu : {0.5, 1.0, 3.0, 40.0, 1e6}) EXPECT_EQ(student_t_cdf(0.0, nu), 0.5);
    EXPECT_NEAR(student_t_cdf(1.0, 1.0), 0.75, 1e-15);
    for (double x : {-30.0, -2.5, 0.3, 7.0})
        EXPECT_NEAR(student_t_cdf(x, 1.0), 0.5 + std::atan(x) / std::numbers::pi, 1e-14);
    // nu = 2 closed form.
    for (double x : {-4.0, -0.1, 1.5, 9.0})
        EXPECT_NEAR(student_t_cdf(x, 2.0), 0.5 + x / (2 * std::sqrt(2 + x * x)), 1e-14);
    EXPECT_NEAR(student_t_cdf(2.0211, 40.0), 0.975001329263313, 1e-13);
    EXPECT_EQ(student_t_cdf(kInf, 5.0), 1.0);
    EXPECT_EQ(student_t_cdf(-kInf, 5.0), 0.0);
}

TEST(StudentT, CdfMatchesQuadratureOracle) {
    for (double nu : {1.5, 5.0, 40.0, 1000.0})
        for (double x : {-6.0, -1.3, 0.2, 2.0211, 4.5})
            EXPECT_NEAR(student_t_cdf(x, nu), oracle::t_cdf_quadrature(x, nu), 1e-13)
                << "nu=" << nu << " x=" << x;
}

TEST(StudentT, QuantileKnownValues) {
    for (double nu : {1.0, 40.0, 1e6}) EXPECT_EQ(student_t_quantile(0.5, nu), 0.0);
    EXPECT_NEAR(student_t_quantile(0.75, 1.0), 1.0, 1e-14);
    for (double p : {0.01, 0.3, 0.9, 0.999})
        EXPECT_NEAR(student_t_quantile(p, 1.0), std::tan(std::numbers::pi * (p - 0.5)), 1e-10);
    const double q = student_t_quantile(0.975, 40.0);
    EXPECT_NEAR(q, 2.0210753903062734, 1e-12);
    EXPECT_NEAR(oracle::t_cdf_quadrature(q, 40.0), 0.975, 1e-12);
    EXPECT_EQ(student_t_quantile(0.0, 3.0), -kInf);
    EXPECT_EQ(student_t_quantile(1.0, 3.0), kInf);
}

TEST(StudentT, QuantileInvertsCdf) {
    for (double nu : {1.0, 2.0, 5.0, 40.0, 1000.0}) {
        for (double x = -8.0; x <= 8.0; x += 0.25) {
            // One ulp of the probability moves the quantile by eps / pdf.
            const double slack = 1e-8 + 8.0 * std::numeric_limits<double>::epsilon() /
                                            static_cast<double>(oracle::t_pdf(x, nu));
            EXPECT_NEAR(student_t_quantile(student_t_cdf(x, nu), nu), x, slack) << nu << " " << x;
        }
        for (double p : {1e-9, 1e-4, 0.02, 0.4, 0.6, 0.97, 1 - 1e-6})
            EXPECT_NEAR(student_t_cdf(student_t_quantile(p, nu), nu), p, 1e-12);
        for (double p : {0x1p-30, 0x1p-14, 0x1p-6, 0.375, 0.625, 0.96875}) {
            const double q = student_t_quantile(p, nu);
            EXPECT_NEAR(student_t_quantile(1 - p, nu), -q, 1e-12 * (1.0 + std::abs(q)));
        }
    }
}

TEST(StudentT, DomainErrors) {
    EXPECT_THROW(student_t_cdf(1.0, 0.0), DomainError);
    EXPECT_THROW(student_t_cdf(1.0, -2.0), DomainError);
    EXPECT_THROW(student_t_quantile(-0.1, 4.0), DomainError);
    EXPECT_THROW(student_t_quantile(1.1, 4.0), DomainError);
    EXPECT_THROW(student_t_quantile(0.5, 0.0), DomainError);
}

TEST(Normal, QuantileInvertsCdf) {
    for (double p : {1e-12, 1e-5, 0.1, 0.5, 0.8, 1 - 1e-9})
        EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-14 + 1e-12 * p);
    EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-13);
}
