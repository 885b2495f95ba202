// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "covertfas/commands.hpp"
#include "covertfas/config.hpp"
#include "covertfas/covert_metrics.hpp"
#include "covertfas/mc_oracle.hpp"
#include "covertfas/mvt.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace covertfas;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(const char* name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %-28s %8.2fs  %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

NodeFas node(int n1, int n2) { return NodeFas{PortGrid(n1, n2, 1.0, 1.0)}; }

LinkBudget sec4_link() { return paper_sec4_preset().link(); }

Outcome fpa_closed_forms() {
    const LinkBudget link = sec4_link();
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double zeta = link.sigma2_w + 0.01 + 0.1 * i;
        const double x = (zeta - link.sigma2_w) / link.p_a;
        worst = std::max(worst, std::abs(miss_detection_prob(link, node(1, 1), zeta).value + std::expm1(-x)));
        LinkBudget l = link;
        l.p_a = dbm_to_watts(0.8 * i);
        worst = std::max(worst, std::abs(outage_prob(l, node(1, 1)).value +
                                         std::expm1(-normalized_rate_threshold(l))));
    }
    return {worst <= 1e-10, fmt("max |err| = %.3g", worst)};
}

Outcome orthant_identity() {
    double worst = 0.0;
    for (double nu : {1.0, 5.0, 40.0})
        for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
            Eigen::MatrixXd s(2, 2);
            s << 1, rho, rho, 1;
            const CopulaSpec spec{nu, CorrelationMatrix::repaired(s)};
            const double expect = 0.25 + std::asin(rho) / (2 * std::numbers::pi);
            worst = std::max(worst, std::abs(mvt_cdf(0.0, spec).value - expect));
        }
    return {worst <= 1e-4, fmt("max |err| = %.3g", worst)};
}

Outcome mvt_vs_sampling() {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> limit(-0.5, 1.5);
    double worst = 0.0;
    for (int m = 0; m < 5; ++m) {
        const Eigen::MatrixXd s = oracle::random_correlation(4, gen);
        std::vector<double> b(4);
        for (auto& v : b) v = limit(gen);
        const double mc = oracle::mvt_cdf_sampling(b, s, 40.0, 1'000'000, 100 + m);
        const double qmc = mvt_cdf(b, CopulaSpec{40.0, CorrelationMatrix::repaired(s)}).value;
        worst = std::max(worst, std::abs(mc - qmc));
    }
    return {worst <= 3e-3, fmt("max |gap| = %.3g", worst)};
}

Outcome copula_vs_channel() {
    const RunConfig cfg = paper_sec4_preset();
    const LinkBudget link = cfg.link();
    const auto sigma = build_correlation_matrix(cfg.willie.grid, cfg.willie.kernel);
    std::vector<double> zetas, xs;
    for (int i = 0; i < 20; ++i) {
        zetas.push_back(1.25 + (6.0 - 1.25) * i / 19.0);
        xs.push_back((zetas.back() - link.sigma2_w) / link.p_a);
    }
    McSettings mc;
    mc.trials = 1'000'000;
    const auto oracle_md = estimate_max_gain_cdf(sigma, xs, mc);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i)
        worst = std::max(worst, std::abs(miss_detection_prob(link, cfg.willie, zetas[i]).value -
                                         oracle_md[i].value));
    return {worst <= 0.03, fmt("max |gap| = %.4f over %g points", worst, 20)};
}

Outcome cop_threshold_behavior() {
    const LinkBudget link = sec4_link();
    const NodeFas willie = node(2, 2);
    const double zeta_star = optimal_threshold(link);
    const auto at_star = covert_outage_prob(link, willie, zeta_star);
    bool ok = true;
    double prev = at_star.value, prev_err = at_star.abs_error_estimate, worst_rise = 0.0;
    for (int i = 1; i <= 40; ++i) {
        const auto c = covert_outage_prob(link, willie, zeta_star + 0.125 * i);
        worst_rise = std::max(worst_rise, c.value - prev);
        if (c.value > prev + prev_err + c.abs_error_estimate) ok = false;
        if (c.value > at_star.value + at_star.abs_error_estimate + c.abs_error_estimate) ok = false;
        prev = c.value;
        prev_err = c.abs_error_estimate;
    }
    for (double z : {-1.0, 0.0, 0.5, 0.99, link.sigma2_w})
        if (covert_outage_prob(link, willie, z).value != 0.0) ok = false;
    return {ok, fmt("COP(zeta*) = %.6f, largest rise = %.2g", at_star.value, worst_rise)};
}

Outcome dominance() {
    const LinkBudget link = sec4_link();
    const std::vector<std::pair<int, int>> grids{{1, 1}, {2, 1}, {2, 2}, {3, 2}, {3, 3}};
    bool ok = true;
    int checks = 0;
    for (double zeta : {1.05, 1.3, 2.0, 4.0}) {
        MetricValue prev{1.0, 0.0};
        for (auto [a, b] : grids) {
            const auto md = miss_detection_prob(link, node(a, b), zeta);
            ok &= md.value <= prev.value + md.abs_error_estimate + prev.abs_error_estimate;
            prev = md;
            ++checks;
        }
    }
    for (double p_dbm : {5.0, 15.0, 25.0}) {
        LinkBudget l = link;
        l.p_a = dbm_to_watts(p_dbm);
        MetricValue prev{1.0, 0.0};
        for (auto [a, b] : grids) {
            const auto out = outage_prob(l, node(a, b));
            ok &= out.value <= prev.value + out.abs_error_estimate + prev.abs_error_estimate;
            prev = out;
            ++checks;
        }
    }
    for (int i = 1; i <= 25; ++i) {
        const double zeta = link.sigma2_w + 0.2 * i;
        const auto fas = covert_outage_prob(link, node(2, 2), zeta);
        const auto fpa = covert_outage_prob(link, node(1, 1), zeta);
        ok &= fas.value + fas.abs_error_estimate + fpa.abs_error_estimate >= fpa.value;
        ++checks;
    }
    return {ok, fmt("%g ordered comparisons", checks)};
}

Outcome success_shape() {
    const RunConfig cfg = paper_sec4_preset(SweepAxis::p_a_dbm);
    const auto grid = cfg.sweep.grid();
    std::vector<double> p(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        RunConfig point = cfg;
        point.p_a_dbm = grid[i];
        p[i] = evaluate_point(point, derive_seed(0, i)).p_suc.value;
    }
    const auto peak = std::max_element(p.begin(), p.end()) - p.begin();
    const bool ok = grid.front() == 0.0 && grid.back() == 40.0 && p.front() < p[peak] &&
                    p.back() < p[peak] && peak > 0 && peak + 1 < static_cast<long>(p.size());
    return {ok, fmt("max P_suc = %.4f at %.0f dBm", p[peak], grid[peak])};
}

Outcome slln() {
    const LinkBudget link = sec4_link();
    McSettings mc;
    mc.trials = 400;
    mc.seed = 11;
    mc.symbols_per_slot = 1000;
    const double small_k = event_level_detection(link, node(2, 2), 1.01, mc).mean_abs_power_gap;
    mc.symbols_per_slot = 100000;
    const double large_k = event_level_detection(link, node(2, 2), 1.01, mc).mean_abs_power_gap;
    const double ratio = small_k / large_k;
    return {ratio >= 7.0 && ratio <= 13.0, fmt("gap ratio k=1e3/k=1e5 = %.2f", ratio)};
}

Outcome determinism() {
    RunConfig cfg = paper_sec4_preset(SweepAxis::zeta);
    cfg.sweep.points = 10;
    const std::string a = sweep_csv(cfg, 42);
    const std::string b = sweep_csv(cfg, 42);
    const std::string c = sweep_csv(cfg, 43);
    return {a == b && a != c, fmt("%g bytes identical across runs", static_cast<double>(a.size()))};
}

} // namespace

int main() {
    run("fpa-closed-forms", fpa_closed_forms);
    run("bivariate-orthant", orthant_identity);
    run("mvt-vs-sampling", mvt_vs_sampling);
    run("copula-vs-channel-oracle", copula_vs_channel);
    run("cop-threshold-behavior", cop_threshold_behavior);
    run("dominance", dominance);
    run("success-vs-power-shape", success_shape);
    run("slln-convergence", slln);
    run("sweep-determinism", determinism);
    std::printf("%s: %d failure(s)\n", failures == 0 ? "ALL PASS" : "FAILED", failures);
    return failures == 0 ? 0 : 1;
}
