#include "covertfas/commands.hpp"

#include "covertfas/parallel.hpp"
#include "covertfas/rng.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace covertfas {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

PointResult evaluate_point(const RunConfig& cfg, std::uint64_t seed) {
    const LinkBudget link = cfg.link();
    QmcSettings qmc = cfg.qmc;
    qmc.seed = seed;

    PointResult r;
    r.seed = seed;
    r.zeta = cfg.evaluation_zeta();
    r.zeta_star = optimal_threshold(link);
    r.p_md = miss_detection_prob(link, cfg.willie, r.zeta, qmc);
    r.p_fa = false_alarm_prob(link, r.zeta);
    r.cop = covert_outage_prob(link, cfg.willie, r.zeta, qmc);
    r.p_out = outage_prob(link, cfg.bob, qmc);
    r.p_suc = success_prob(link, cfg.bob, cfg.willie, qmc);
    return r;
}

nlohmann::ordered_json eval_record(const RunConfig& cfg, std::uint64_t seed) {
    const PointResult r = evaluate_point(cfg, seed);
    const LinkBudget link = cfg.link();
    nlohmann::ordered_json j;
    j["p_md"] = r.p_md.value;
    j["p_md_err"] = r.p_md.abs_error_estimate;
    j["p_fa"] = r.p_fa;
    j["cop"] = r.cop.value;
    j["cop_err"] = r.cop.abs_error_estimate;
    j["zeta"] = r.zeta;
    j["zeta_star"] = r.zeta_star;
    j["p_out"] = r.p_out.value;
    j["p_out_err"] = r.p_out.abs_error_estimate;
    j["p_suc"] = r.p_suc.value;
    j["p_suc_err"] = r.p_suc.abs_error_estimate;
    j["qmc_reached_target"] =
        r.p_md.reached_target && r.p_out.reached_target && r.p_suc.reached_target;
    j["seed"] = r.seed;
    j["p_a"] = link.p_a;
    j["sigma2_w"] = link.sigma2_w;
    j["sigma2_b"] = link.sigma2_b;
    j["r_b"] = link.r_b;
    j["mu"] = link.mu;
    j["r_bar_b"] = normalized_rate_threshold(link);
    j["n_w"] = cfg.willie.grid.size();
    j["w_w"] = {cfg.willie.grid.w1, cfg.willie.grid.w2};
    j["nu_w"] = cfg.willie.nu;
    j["n_b"] = cfg.bob.grid.size();
    j["w_b"] = {cfg.bob.grid.w1, cfg.bob.grid.w2};
    j["nu_b"] = cfg.bob.nu;
    return j;
}

namespace {

RunConfig at_axis_point(RunConfig cfg, SweepAxis axis, double v) {
    switch (axis) {
    case SweepAxis::zeta:
        cfg.zeta = v;
        break;
    case SweepAxis::p_a_dbm:
        cfg.p_a_dbm = v;
        break;
    case SweepAxis::n_ports_w:
        cfg.willie.grid.n1_count = static_cast<int>(v);
        cfg.willie.grid.n2_count = 1;
        break;
    case SweepAxis::n_ports_b:
        cfg.bob.grid.n1_count = static_cast<int>(v);
        cfg.bob.grid.n2_count = 1;
        break;
    case SweepAxis::w_aperture:
        cfg.willie.grid.w1 = cfg.willie.grid.w2 = v;
        cfg.bob.grid.w1 = cfg.bob.grid.w2 = v;
        break;
    }
    return cfg;
}

} // namespace

std::string sweep_csv(const RunConfig& cfg, std::uint64_t master_seed) {
    cfg.sweep.validate();
    const auto values = cfg.sweep.grid();

    struct Job {
        std::string scenario;
        double value;
        RunConfig cfg;
    };
    std::vector<Job> jobs;
    for (const auto& name : cfg.sweep.scenarios) {
        const auto it = cfg.scenarios.find(name);
        if (it == cfg.scenarios.end())
            throw ConfigError(0, "sweep references undefined scenario '" + name + "'");
        const RunConfig base = resolve_scenario(cfg, it->second);
        for (double v : values) {
            RunConfig point = at_axis_point(base, cfg.sweep.axis, v);
            point.validate();
            jobs.push_back({name, v, std::move(point)});
        }
    }

    std::vector<std::string> rows(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        const PointResult r = evaluate_point(jobs[i].cfg, derive_seed(master_seed, i));
        std::string row = jobs[i].scenario;
        row += ',';
        row += to_string(cfg.sweep.axis);
        for (double x : {jobs[i].value, r.p_md.value, r.p_md.abs_error_estimate, r.p_fa,
                         r.cop.value, r.cop.abs_error_estimate, r.p_out.value,
                         r.p_out.abs_error_estimate, r.p_suc.value, r.p_suc.abs_error_estimate}) {
            row += ',';
            row += format_real(x);
        }
        row += ',';
        row += std::to_string(r.seed);
        rows[i] = std::move(row);
    });

    std::string out = kSweepHeader;
    out += '\n';
    for (const auto& row : rows) {
        out += row;
        out += '\n';
    }
    return out;
}

bool ValidationReport::all_pass() const {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

std::string ValidationReport::csv() const {
    std::string out = "metric,zeta,analytic,analytic_err,oracle,oracle_err,gap,tolerance,status\n";
    for (const auto& r : rows) {
        out += r.metric;
        for (double x : {r.zeta, r.analytic.value, r.analytic.abs_error_estimate, r.oracle.value,
                         r.oracle.abs_error_estimate, r.gap, r.tolerance}) {
            out += ',';
            out += format_real(x);
        }
        out += r.pass ? ",PASS\n" : ",FAIL\n";
    }
    return out;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    std::size_t failed = 0;
    double worst_gap = 0.0;
    for (const auto& r : rows) {
        if (!r.pass) ++failed;
        worst_gap = std::max(worst_gap, r.gap);
    }
    os << "validated " << rows.size() << " points: " << rows.size() - failed << " PASS, "
       << failed << " FAIL; largest |gap| = " << worst_gap << '\n';
    for (const auto& r : rows)
        if (!r.pass)
            os << "  FAIL " << r.metric << " zeta=" << r.zeta << " analytic=" << r.analytic.value
               << " oracle=" << r.oracle.value << " gap=" << r.gap << " tol=" << r.tolerance
               << '\n';
    return os.str();
}

ValidationReport run_validation(const RunConfig& cfg) {
    cfg.validate();
    const LinkBudget link = cfg.link();
    const ValidateSpec& v = cfg.validation;

    std::vector<double> zetas(v.points);
    for (int i = 0; i < v.points; ++i)
        zetas[i] = i + 1 == v.points
                       ? v.zeta_stop
                       : v.zeta_start + (v.zeta_stop - v.zeta_start) * i / (v.points - 1);

    std::vector<double> xs;
    for (double z : zetas) xs.push_back(std::max(0.0, (z - link.sigma2_w) / link.p_a));
    const auto oracle_md = estimate_max_gain_cdf(
        build_correlation_matrix(cfg.willie.grid, cfg.willie.kernel), xs, cfg.mc);

    McSettings bob_mc = cfg.mc;
    bob_mc.seed = derive_seed(cfg.mc.seed, 0xb0b);
    const MetricValue oracle_out = estimate_max_gain_cdf(
        build_correlation_matrix(cfg.bob.grid, cfg.bob.kernel), normalized_rate_threshold(link),
        bob_mc);

    ValidationReport report;
    report.rows.resize(zetas.size() + 1);
    parallel_for(zetas.size() + 1, [&](std::size_t i) {
        QmcSettings qmc = cfg.qmc;
        qmc.seed = derive_seed(cfg.qmc.seed, i);
        ValidationRow row;
        double allowance = 0.0;
        if (i < zetas.size()) {
            row.metric = "p_md";
            row.zeta = zetas[i];
            row.analytic = miss_detection_prob(link, cfg.willie, zetas[i], qmc);
            row.oracle = zetas[i] <= link.sigma2_w ? MetricValue{0.0, 0.0} : oracle_md[i];
            allowance = cfg.willie.grid.size() > 1 ? v.copula_tolerance : 0.0;
        } else {
            row.metric = "p_out";
            row.zeta = std::nan("");
            row.analytic = outage_prob(link, cfg.bob, qmc);
            row.oracle = oracle_out;
            allowance = cfg.bob.grid.size() > 1 ? v.copula_tolerance : 0.0;
        }
        row.gap = std::abs(row.analytic.value - row.oracle.value);
        row.tolerance =
            allowance + row.analytic.abs_error_estimate + row.oracle.abs_error_estimate;
        row.pass = row.gap <= row.tolerance;
        report.rows[i] = std::move(row);
    });
    return report;
}

} // namespace covertfas
