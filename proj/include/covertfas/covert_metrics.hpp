#pragma once

// Detection and transmission metrics for a single-antenna transmitter, a FAS
// receiver (Bob) and a FAS warden (Willie) that both activate their best port.

#include "covertfas/mvt.hpp"
#include "covertfas/port_geometry.hpp"

namespace covertfas {

/// All powers on a common linear scale.
struct LinkBudget {
    double p_a = 0.1;       // transmit power
    double sigma2_w = 1.0;  // warden noise power
    double sigma2_b = 0.01; // receiver noise power
    double r_b = 0.5;       // target rate, bits per channel use
    double mu = 0.01;       // warden threshold margin above its noise floor

    void validate() const;
};

/// Copula dependence parameter taken from the port field correlation rho, or
/// from rho^2 (the correlation of the exponential gains).
enum class Dependence { field_rho, gain_rho_sq };

struct NodeFas {
    PortGrid grid;
    double nu = 40.0;
    BesselKernel kernel = BesselKernel::jakes_j0;
    Dependence dependence = Dependence::field_rho;

    void validate() const;
};

double db_to_linear(double x_db);
/// Milliwatt-referenced: 20 dBm -> 100.
double dbm_to_linear(double x_dbm);
/// Watt-referenced: 20 dBm -> 0.1.
double dbm_to_watts(double x_dbm);

CopulaSpec copula_for(const NodeFas& node);

/// P(max_n g_n <= x) under the node's t-copula with Exp(1) marginals, kept
/// within the Frechet bounds [1 - N e^{-x}, 1 - e^{-x}] and, in the far tail,
/// the pairwise Bonferroni upper bound.
MetricValue copula_max_gain_cdf(const NodeFas& node, double x, const QmcSettings& qmc = {});

MetricValue miss_detection_prob(const LinkBudget& link, const NodeFas& willie, double zeta,
                                const QmcSettings& qmc = {});
double false_alarm_prob(const LinkBudget& link, double zeta);
MetricValue covert_outage_prob(const LinkBudget& link, const NodeFas& willie, double zeta,
                               const QmcSettings& qmc = {});

/// sigma_w^2 + mu: the covert outage probability is zero at or below the noise
/// floor and nonincreasing above it.
double optimal_threshold(const LinkBudget& link);

/// (2^R_b - 1) sigma_b^2 / P_a.
double normalized_rate_threshold(const LinkBudget& link);

MetricValue outage_prob(const LinkBudget& link, const NodeFas& bob, const QmcSettings& qmc = {});

/// P_MD at the optimal threshold times (1 - P_out), with first-order error
/// propagation.
MetricValue success_prob(const LinkBudget& link, const NodeFas& bob, const NodeFas& willie,
                         const QmcSettings& qmc = {});

} // namespace covertfas
