#include "covertfas/mvt.hpp"

#include "covertfas/errors.hpp"
#include "covertfas/rng.hpp"
#include "covertfas/special_functions.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

namespace covertfas {

namespace {

using Policy = boost::math::policies::policy<boost::math::policies::promote_double<false>>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

// ---------------------------------------------------------------------------
// Rank-1 lattice generating vectors

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::uint64_t next_prime(std::uint64_t n) {
    while (!is_prime(n)) ++n;
    return n;
}

// P_2 figure of merit of the Korobov vector (1, a, a^2, ...) mod n.
double korobov_merit(std::uint64_t n, std::uint64_t a, int dim) {
    constexpr double c = 2.0 * std::numbers::pi * std::numbers::pi;
    std::vector<std::uint64_t> z(dim);
    z[0] = 1;
    for (int j = 1; j < dim; ++j) z[j] = (z[j - 1] * a) % n;
    double sum = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        double prod = 1.0;
        for (int j = 0; j < dim; ++j) {
            const double x = static_cast<double>((k * z[j]) % n) / static_cast<double>(n);
            prod *= 1.0 + c * (x * x - x + 1.0 / 6.0);
        }
        sum += prod;
    }
    return sum / static_cast<double>(n) - 1.0;
}

// Best Korobov vector among a fixed deterministic candidate set; cached.
std::vector<std::uint64_t> generating_vector(std::uint64_t n, int dim) {
    static std::mutex mutex;
    static std::map<std::pair<std::uint64_t, int>, std::vector<std::uint64_t>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find({n, dim}); it != cache.end()) return it->second;
    }

    constexpr int kCandidates = 24;
    std::uint64_t best_a = 1;
    double best_merit = kInf;
    for (int c = 1; c <= kCandidates; ++c) {
        // Golden-ratio spread over [2, n-1].
        const double frac = std::fmod(c * 0.6180339887498949, 1.0);
        const auto a = 2 + static_cast<std::uint64_t>(frac * static_cast<double>(n - 3));
        const double merit = korobov_merit(n, a, dim);
        if (merit < best_merit) {
            best_merit = merit;
            best_a = a;
        }
    }
    std::vector<std::uint64_t> z(dim);
    z[0] = 1;
    for (int j = 1; j < dim; ++j) z[j] = (z[j - 1] * best_a) % n;

    std::lock_guard lock(mutex);
    cache.emplace(std::pair{n, dim}, z);
    return z;
}

// ---------------------------------------------------------------------------
// Separation-of-variables integrand for the multivariate t

class TIntegrand {
public:
    TIntegrand(std::vector<double> upper, Eigen::MatrixXd chol, double nu)
        : b_(std::move(upper)), l_(std::move(chol)), nu_(nu), y_(b_.size()) {}

    [[nodiscard]] int dim() const { return static_cast<int>(b_.size()); }

    // w in [0,1]^dim: w[0] drives the chi radius, w[1..] the truncated normals.
    double operator()(std::span<const double> w) {
        const double chi2 = 2.0 * boost::math::gamma_p_inv(0.5 * nu_, std::clamp(w[0], 1e-300, 1.0 - 1e-16), Policy());
        const double r = std::sqrt(chi2 / nu_);
        const int d = dim();
        double prod = 1.0;
        for (int i = 0; i < d; ++i) {
            double s = 0.0;
            for (int j = 0; j < i; ++j) s += l_(i, j) * y_[j];
            const double limit = r * b_[i] - s;
            const double lii = l_(i, i);
            const double e = lii > 0.0 ? normal_cdf(limit / lii) : (limit >= 0.0 ? 1.0 : 0.0);
            prod *= e;
            if (prod <= 0.0) return 0.0;
            if (i + 1 < d) {
                const double u = std::clamp(w[i + 1] * e, 1e-300, 1.0 - 1e-16);
                y_[i] = normal_quantile(u);
            }
        }
        return prod;
    }

private:
    std::vector<double> b_;
    Eigen::MatrixXd l_;
    double nu_;
    std::vector<double> y_;
};

struct LatticeEstimate {
    double mean = 0.0;
    double abs_error = 0.0;
};

LatticeEstimate shifted_lattice(TIntegrand& f, std::uint64_t n, int shifts, std::uint64_t seed,
                                int round) {
    const int d = f.dim();
    const auto z = generating_vector(n, d);
    std::vector<double> shift(d), w(d);
    std::vector<double> estimates;
    estimates.reserve(shifts);
    for (int s = 0; s < shifts; ++s) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(round) * 1024 + s));
        for (auto& v : shift) v = rng.uniform();
        double sum = 0.0;
        for (std::uint64_t k = 0; k < n; ++k) {
            for (int j = 0; j < d; ++j) {
                double x = static_cast<double>((k * z[j]) % n) / static_cast<double>(n) + shift[j];
                x -= std::floor(x);
                w[j] = 1.0 - std::abs(2.0 * x - 1.0); // baker's transform
            }
            sum += f(w);
        }
        estimates.push_back(sum / static_cast<double>(n));
    }
    const double mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / shifts;
    double ss = 0.0;
    for (double e : estimates) ss += (e - mean) * (e - mean);
    const double std_error = std::sqrt(ss / (shifts - 1) / shifts);
    return {mean, 3.0 * std_error};
}

} // namespace

void CopulaSpec::validate() const {
    if (!(nu > 0.0)) throw DomainError("CopulaSpec: nu must be > 0");
}

void QmcSettings::validate() const {
    if (!(target_abs_error > 0.0)) throw DomainError("QmcSettings: target_abs_error must be > 0");
    if (max_points < 1) throw DomainError("QmcSettings: max_points must be >= 1");
    if (shifts < 2) throw DomainError("QmcSettings: shifts must be >= 2");
}

Eigen::MatrixXd cholesky_psd(const CorrelationMatrix& sigma) {
    const Eigen::MatrixXd& a = sigma.matrix();
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = a(j, j) - l.row(j).head(j).squaredNorm();
        if (pivot < -1e-8)
            throw NumericalError("cholesky_psd: matrix is indefinite (pivot " +
                                 std::to_string(pivot) + ")");
        pivot = std::max(pivot, 0.0);
        const double ljj = std::sqrt(pivot);
        l(j, j) = ljj;
        if (ljj <= 1e-150) continue;
        for (Eigen::Index i = j + 1; i < n; ++i)
            l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
    }
    return l;
}

MetricValue bivariate_t_cdf(double b1, double b2, double rho, double nu) {
    if (!(nu > 0.0)) throw DomainError("bivariate_t_cdf: nu must be > 0");
    if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("bivariate_t_cdf: |rho| > 1");
    if (std::isnan(b1) || std::isnan(b2)) throw DomainError("bivariate_t_cdf: NaN limit");
    if (b1 == -kInf || b2 == -kInf) return {0.0, 0.0};
    if (b1 == kInf) return {student_t_cdf(b2, nu), 0.0};
    if (b2 == kInf) return {student_t_cdf(b1, nu), 0.0};

    const double one_minus_rho2 = (1.0 - rho) * (1.0 + rho);
    if (one_minus_rho2 < 1e-14) {
        if (rho > 0.0) return {student_t_cdf(std::min(b1, b2), nu), 0.0};
        return {std::max(0.0, student_t_cdf(b1, nu) - student_t_cdf(-b2, nu)), 0.0};
    }

    // Integrate over the coordinate with the smaller limit: its density carries
    // less mass, so the truncated integrand is better behaved.
    if (b2 < b1) std::swap(b1, b2);
    const boost::math::students_t_distribution<double, Policy> outer(nu);
    const double cond_nu = nu + 1.0;
    const double cond_scale = std::sqrt(one_minus_rho2 / cond_nu);
    auto integrand = [&](double t) {
        const double x = b1 - t;
        const double density = boost::math::pdf(outer, x);
        if (density == 0.0) return 0.0;
        const double z = (b2 - rho * x) / (cond_scale * std::sqrt(nu + x * x));
        return density * student_t_cdf(z, cond_nu);
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    const double value = integrator.integrate(integrand, 1e-12, &err);
    return {clamp01(value), std::max(err, 1e-15)};
}

MetricValue mvt_cdf(std::span<const double> upper, const CopulaSpec& spec,
                    const QmcSettings& settings) {
    spec.validate();
    settings.validate();
    const int full_dim = spec.sigma.dim();
    if (static_cast<int>(upper.size()) != full_dim)
        throw DomainError("mvt_cdf: upper has length " + std::to_string(upper.size()) +
                          ", expected " + std::to_string(full_dim));

    // Coordinates at +inf marginalize out; any -inf empties the region.
    std::vector<int> active;
    for (int i = 0; i < full_dim; ++i) {
        if (std::isnan(upper[i])) throw DomainError("mvt_cdf: NaN limit");
        if (upper[i] == -kInf) return {0.0, 0.0};
        if (upper[i] != kInf) active.push_back(i);
    }
    if (active.empty()) return {1.0, 0.0};

    // Ascending limits first.
    std::stable_sort(active.begin(), active.end(),
                     [&](int a, int b) { return upper[a] < upper[b]; });
    const int d = static_cast<int>(active.size());
    std::vector<double> b(d);
    for (int i = 0; i < d; ++i) b[i] = upper[active[i]];

    if (d == 1) return {student_t_cdf(b[0], spec.nu), 0.0};
    if (d == 2) return bivariate_t_cdf(b[0], b[1], spec.sigma(active[0], active[1]), spec.nu);

    Eigen::MatrixXd sub(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) sub(i, j) = spec.sigma(active[i], active[j]);
    TIntegrand integrand(b, cholesky_psd(CorrelationMatrix::repaired(sub)), spec.nu);

    const auto shifts = static_cast<std::uint64_t>(settings.shifts);
    std::uint64_t n = next_prime(std::max<std::uint64_t>(
        3, std::min<std::uint64_t>(251, settings.max_points / shifts)));
    std::uint64_t used = 0;
    LatticeEstimate est;
    bool reached = false;
    for (int round = 0;; ++round) {
        est = shifted_lattice(integrand, n, settings.shifts, settings.seed, round);
        used += n * shifts;
        if (est.abs_error <= settings.target_abs_error) {
            reached = true;
            break;
        }
        const std::uint64_t next = next_prime(2 * n);
        if (used + next * shifts > settings.max_points) break;
        n = next;
    }
    return {clamp01(est.mean), est.abs_error, reached};
}

MetricValue mvt_cdf(double upper, const CopulaSpec& spec, const QmcSettings& settings) {
    const std::vector<double> limits(spec.sigma.dim(), upper);
    return mvt_cdf(limits, spec, settings);
}

} // namespace covertfas
