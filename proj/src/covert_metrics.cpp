#include "covertfas/covert_metrics.hpp"

#include "covertfas/errors.hpp"
#include "covertfas/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace covertfas {

namespace {

constexpr double kBonferroniTail = 1e-2;

} // namespace

void LinkBudget::validate() const {
    if (!(p_a > 0.0) || !std::isfinite(p_a)) throw DomainError("LinkBudget: p_a must be > 0");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("LinkBudget: mu must be > 0");
    if (!(sigma2_w >= 0.0) || !std::isfinite(sigma2_w))
        throw DomainError("LinkBudget: sigma2_w must be >= 0");
    if (!(sigma2_b >= 0.0) || !std::isfinite(sigma2_b))
        throw DomainError("LinkBudget: sigma2_b must be >= 0");
    if (!(r_b >= 0.0) || !std::isfinite(r_b)) throw DomainError("LinkBudget: r_b must be >= 0");
}

void NodeFas::validate() const {
    grid.validate();
    if (!(nu > 0.0)) throw DomainError("NodeFas: nu must be > 0");
}

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }
double dbm_to_linear(double x_dbm) { return std::pow(10.0, x_dbm / 10.0); }
double dbm_to_watts(double x_dbm) { return std::pow(10.0, (x_dbm - 30.0) / 10.0); }

CopulaSpec copula_for(const NodeFas& node) {
    node.validate();
    Eigen::MatrixXd raw = raw_correlation_matrix(node.grid, node.kernel);
    if (node.dependence == Dependence::gain_rho_sq) raw = raw.cwiseProduct(raw);
    return CopulaSpec{node.nu, CorrelationMatrix::repaired(raw)};
}

MetricValue copula_max_gain_cdf(const NodeFas& node, double x, const QmcSettings& qmc) {
    if (std::isnan(x)) throw DomainError("copula_max_gain_cdf: NaN threshold");
    if (x <= 0.0) return {0.0, 0.0};
    const CopulaSpec spec = copula_for(node);
    const double u = student_t_quantile(-std::expm1(-x), spec.nu);
    MetricValue m = mvt_cdf(u, spec, qmc);
    // Frechet bounds from the Exp(1) marginals, tightened by second-order
    // Bonferroni bounds once the union of exceedances is rare.
    const int n = spec.sigma.dim();
    const double tail = std::exp(-x);
    const double s1 = n * tail;
    double upper = -std::expm1(-x);
    const double lower = std::max(0.0, 1.0 - s1);
    if (n > 1 && s1 < kBonferroniTail) {
        double s2 = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                s2 += bivariate_t_cdf(-u, -u, std::clamp(spec.sigma(i, j), -1.0, 1.0), spec.nu).value;
        upper = std::min(upper, 1.0 - s1 + s2);
    }
    m.value = std::clamp(m.value, lower, upper);
    m.abs_error_estimate = std::min(m.abs_error_estimate, upper - lower);
    return m;
}

MetricValue miss_detection_prob(const LinkBudget& link, const NodeFas& willie, double zeta,
                                const QmcSettings& qmc) {
    link.validate();
    if (!std::isfinite(zeta)) throw DomainError("miss_detection_prob: zeta must be finite");
    if (zeta <= link.sigma2_w) return {0.0, 0.0};
    return copula_max_gain_cdf(willie, (zeta - link.sigma2_w) / link.p_a, qmc);
}

double false_alarm_prob(const LinkBudget& link, double zeta) {
    link.validate();
    if (!std::isfinite(zeta)) throw DomainError("false_alarm_prob: zeta must be finite");
    return zeta <= link.sigma2_w ? 1.0 : 0.0;
}

MetricValue covert_outage_prob(const LinkBudget& link, const NodeFas& willie, double zeta,
                               const QmcSettings& qmc) {
    const double p_fa = false_alarm_prob(link, zeta);
    if (p_fa == 1.0) return {0.0, 0.0};
    const MetricValue md = miss_detection_prob(link, willie, zeta, qmc);
    return {1.0 - md.value, md.abs_error_estimate, md.reached_target};
}

double optimal_threshold(const LinkBudget& link) {
    link.validate();
    return link.sigma2_w + link.mu;
}

double normalized_rate_threshold(const LinkBudget& link) {
    link.validate();
    return std::expm1(link.r_b * std::numbers::ln2) * link.sigma2_b / link.p_a;
}

MetricValue outage_prob(const LinkBudget& link, const NodeFas& bob, const QmcSettings& qmc) {
    return copula_max_gain_cdf(bob, normalized_rate_threshold(link), qmc);
}

MetricValue success_prob(const LinkBudget& link, const NodeFas& bob, const NodeFas& willie,
                         const QmcSettings& qmc) {
    const MetricValue md = miss_detection_prob(link, willie, optimal_threshold(link), qmc);
    const MetricValue out = outage_prob(link, bob, qmc);
    const double delivered = 1.0 - out.value;
    return {md.value * delivered,
            md.value * out.abs_error_estimate + delivered * md.abs_error_estimate,
            md.reached_target && out.reached_target};
}

} // namespace covertfas
