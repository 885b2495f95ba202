#pragma once

// Monte Carlo ground truth built directly on spatially correlated Rayleigh
// fading. It uses the exact Jakes field correlation and never touches the
// copula, so it measures the copula approximation rather than restating it.

#include "covertfas/covert_metrics.hpp"
#include "covertfas/mvt.hpp"
#include "covertfas/rng.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace covertfas {

struct McSettings {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0;
    std::uint64_t symbols_per_slot = 1000; // k

    void validate() const;
};

/// Per-port channel gains |h_n|^2 of one block-fading realization.
struct ChannelDraw {
    std::vector<double> gains;
};

/// h = L z with z i.i.d. CN(0,1).
std::vector<std::complex<double>> sample_field(const Eigen::MatrixXd& chol, SplitMix64& rng);
ChannelDraw sample_channel(const Eigen::MatrixXd& chol, SplitMix64& rng);

/// Fraction of draws whose best-port gain is <= x; error = 3 binomial SE.
MetricValue estimate_max_gain_cdf(const CorrelationMatrix& sigma, double x,
                                  const McSettings& settings);

/// Same estimate at several thresholds from one shared set of draws.
std::vector<MetricValue> estimate_max_gain_cdf(const CorrelationMatrix& sigma,
                                               std::span<const double> xs,
                                               const McSettings& settings);

struct EmpiricalMetrics {
    MetricValue p_md;
    double p_fa = 0.0;
    MetricValue cop;
    MetricValue p_out;
    MetricValue p_suc;
};

/// Bob and Willie use independent streams derived from settings.seed.
EmpiricalMetrics estimate_metrics(const LinkBudget& link, const NodeFas& bob,
                                  const NodeFas& willie, double zeta, const McSettings& settings);

struct DetectionEvents {
    double empirical_md_rate = 0.0;
    double md_std_error = 0.0;
    double mean_abs_power_gap = 0.0;
};

/// Finite-k warden: per trial, QPSK symbols through the best port plus
/// CN(0, sigma_w^2) noise, averaged power compared against zeta. Channel
/// realizations depend only on the seed, not on k.
DetectionEvents event_level_detection(const LinkBudget& link, const NodeFas& willie, double zeta,
                                      const McSettings& settings);

} // namespace covertfas
