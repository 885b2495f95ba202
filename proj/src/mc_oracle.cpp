#include "covertfas/mc_oracle.hpp"

#include "covertfas/errors.hpp"
#include "covertfas/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace covertfas {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr std::uint64_t kChunkTrials = std::uint64_t{1} << 15;
constexpr std::uint64_t kEventChunkTrials = 64;
constexpr std::uint64_t kBobStream = 0xb0b;
constexpr std::uint64_t kSymbolStream = 0x5e1f;

std::uint64_t chunk_count(std::uint64_t trials, std::uint64_t chunk) {
    return (trials + chunk - 1) / chunk;
}

MetricValue binomial(std::uint64_t hits, std::uint64_t trials) {
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    return {p, 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

double max_gain(const Eigen::MatrixXd& chol, SplitMix64& rng, std::vector<double>& re,
                std::vector<double>& im) {
    const auto n = chol.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto [a, b] = rng.normal_pair();
        re[j] = a * kInvSqrt2;
        im[j] = b * kInvSqrt2;
    }
    double best = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double hr = 0.0, hi = 0.0;
        for (Eigen::Index j = 0; j <= i; ++j) {
            hr += chol(i, j) * re[j];
            hi += chol(i, j) * im[j];
        }
        best = std::max(best, hr * hr + hi * hi);
    }
    return best;
}

} // namespace

void McSettings::validate() const {
    if (trials < 1) throw DomainError("McSettings: trials must be >= 1");
    if (symbols_per_slot < 1) throw DomainError("McSettings: symbols_per_slot must be >= 1");
}

std::vector<std::complex<double>> sample_field(const Eigen::MatrixXd& chol, SplitMix64& rng) {
    const auto n = chol.rows();
    std::vector<std::complex<double>> z(n);
    for (auto& v : z) {
        const auto [a, b] = rng.normal_pair();
        v = {a * kInvSqrt2, b * kInvSqrt2};
    }
    std::vector<std::complex<double>> h(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::complex<double> acc = 0.0;
        for (Eigen::Index j = 0; j <= i; ++j) acc += chol(i, j) * z[j];
        h[i] = acc;
    }
    return h;
}

ChannelDraw sample_channel(const Eigen::MatrixXd& chol, SplitMix64& rng) {
    const auto h = sample_field(chol, rng);
    ChannelDraw draw;
    draw.gains.reserve(h.size());
    for (const auto& v : h) draw.gains.push_back(std::norm(v));
    return draw;
}

std::vector<MetricValue> estimate_max_gain_cdf(const CorrelationMatrix& sigma,
                                               std::span<const double> xs,
                                               const McSettings& settings) {
    settings.validate();
    for (double x : xs)
        if (std::isnan(x)) throw DomainError("estimate_max_gain_cdf: NaN threshold");

    // Sorted thresholds; each draw lands in the bin of the first x >= its max.
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    const Eigen::MatrixXd chol = cholesky_psd(sigma);
    const std::uint64_t chunks = chunk_count(settings.trials, kChunkTrials);
    std::vector<std::vector<std::uint64_t>> bins(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        SplitMix64 rng(derive_seed(settings.seed, c));
        const std::uint64_t begin = c * kChunkTrials;
        const std::uint64_t end = std::min(settings.trials, begin + kChunkTrials);
        std::vector<std::uint64_t> local(sorted.size() + 1, 0);
        std::vector<double> re(chol.rows()), im(chol.rows());
        for (std::uint64_t t = begin; t < end; ++t) {
            const double g = max_gain(chol, rng, re, im);
            const auto pos = std::lower_bound(sorted.begin(), sorted.end(), g) - sorted.begin();
            ++local[pos];
        }
        bins[c] = std::move(local);
    });

    std::vector<std::uint64_t> cumulative(sorted.size(), 0);
    for (const auto& local : bins) {
        std::uint64_t running = 0;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            running += local[i];
            cumulative[i] += running;
        }
    }

    std::vector<MetricValue> out;
    out.reserve(xs.size());
    for (double x : xs) {
        if (x <= 0.0) {
            out.push_back({0.0, 0.0});
            continue;
        }
        const auto pos = std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
        out.push_back(binomial(cumulative[pos], settings.trials));
    }
    return out;
}

MetricValue estimate_max_gain_cdf(const CorrelationMatrix& sigma, double x,
                                  const McSettings& settings) {
    const double xs[] = {x};
    return estimate_max_gain_cdf(sigma, xs, settings).front();
}

EmpiricalMetrics estimate_metrics(const LinkBudget& link, const NodeFas& bob,
                                  const NodeFas& willie, double zeta, const McSettings& settings) {
    link.validate();
    bob.validate();
    willie.validate();
    settings.validate();
    if (!std::isfinite(zeta)) throw DomainError("estimate_metrics: zeta must be finite");

    EmpiricalMetrics m;
    const double zeta_star = optimal_threshold(link);
    const double willie_x[] = {std::max(0.0, (zeta - link.sigma2_w) / link.p_a),
                               std::max(0.0, (zeta_star - link.sigma2_w) / link.p_a)};
    const auto md = estimate_max_gain_cdf(build_correlation_matrix(willie.grid, willie.kernel),
                                          willie_x, settings);

    McSettings bob_settings = settings;
    bob_settings.seed = derive_seed(settings.seed, kBobStream);
    m.p_out = estimate_max_gain_cdf(build_correlation_matrix(bob.grid, bob.kernel),
                                    normalized_rate_threshold(link), bob_settings);

    m.p_fa = false_alarm_prob(link, zeta);
    m.p_md = zeta <= link.sigma2_w ? MetricValue{0.0, 0.0} : md[0];
    m.cop = {1.0 - m.p_fa - m.p_md.value, m.p_md.abs_error_estimate};

    const double delivered = 1.0 - m.p_out.value;
    m.p_suc = {md[1].value * delivered,
               md[1].value * m.p_out.abs_error_estimate + delivered * md[1].abs_error_estimate};
    return m;
}

DetectionEvents event_level_detection(const LinkBudget& link, const NodeFas& willie, double zeta,
                                      const McSettings& settings) {
    link.validate();
    willie.validate();
    settings.validate();
    if (!std::isfinite(zeta)) throw DomainError("event_level_detection: zeta must be finite");

    const Eigen::MatrixXd chol = cholesky_psd(build_correlation_matrix(willie.grid, willie.kernel));
    const std::uint64_t k = settings.symbols_per_slot;
    const double amplitude = std::sqrt(link.p_a);
    const double noise_sd = std::sqrt(link.sigma2_w / 2.0);
    const std::uint64_t chunks = chunk_count(settings.trials, kEventChunkTrials);

    struct Partial {
        std::uint64_t missed = 0;
        double gap_sum = 0.0;
    };
    std::vector<Partial> partials(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        SplitMix64 channel_rng(derive_seed(settings.seed, c));
        SplitMix64 symbol_rng(derive_seed(settings.seed ^ kSymbolStream, c));
        const std::uint64_t begin = c * kEventChunkTrials;
        const std::uint64_t end = std::min(settings.trials, begin + kEventChunkTrials);
        Partial p;
        for (std::uint64_t t = begin; t < end; ++t) {
            const auto h = sample_field(chol, channel_rng);
            const auto best = std::max_element(h.begin(), h.end(), [](const auto& a, const auto& b) {
                return std::norm(a) < std::norm(b);
            });
            const std::complex<double> gain = amplitude * *best;

            double power_sum = 0.0;
            std::uint64_t bits = 0;
            for (std::uint64_t i = 0; i < k; ++i) {
                if (i % 32 == 0) bits = symbol_rng();
                const double sr = (bits & 1u) ? kInvSqrt2 : -kInvSqrt2;
                const double si = (bits & 2u) ? kInvSqrt2 : -kInvSqrt2;
                bits >>= 2;
                const auto [nr, ni] = symbol_rng.normal_pair();
                const std::complex<double> y =
                    gain * std::complex<double>(sr, si) + std::complex<double>(noise_sd * nr, noise_sd * ni);
                power_sum += std::norm(y);
            }
            const double avg_power = power_sum / static_cast<double>(k);
            const double mean_power = link.p_a * std::norm(*best) + link.sigma2_w;
            if (avg_power <= zeta) ++p.missed;
            p.gap_sum += std::abs(avg_power - mean_power);
        }
        partials[c] = p;
    });

    std::uint64_t missed = 0;
    double gap_sum = 0.0;
    for (const auto& p : partials) {
        missed += p.missed;
        gap_sum += p.gap_sum;
    }
    const double n = static_cast<double>(settings.trials);
    const double rate = static_cast<double>(missed) / n;
    return {rate, std::sqrt(rate * (1.0 - rate) / n), gap_sum / n};
}

} // namespace covertfas
