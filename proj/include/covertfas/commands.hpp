#pragma once

// Evaluation, sweep and oracle-validation drivers behind the covertfas CLI.

#include "covertfas/config.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>

namespace covertfas {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidationFailed = 1,
    kExitParseError = 2,
    kExitInvariantViolation = 3,
    kExitIoError = 4,
};

struct PointResult {
    double zeta = 0.0;
    double zeta_star = 0.0;
    MetricValue p_md;
    double p_fa = 0.0;
    MetricValue cop;
    MetricValue p_out;
    MetricValue p_suc;
    std::uint64_t seed = 0;
};

/// All metrics for one resolved configuration; QMC streams seeded by `seed`.
PointResult evaluate_point(const RunConfig& cfg, std::uint64_t seed);

/// Flat record: metrics, error estimates and the resolved linear parameters.
nlohmann::ordered_json eval_record(const RunConfig& cfg, std::uint64_t seed);

/// Header plus one row per (scenario, axis point), scenario-major. Row r is
/// evaluated with derive_seed(master_seed, r).
std::string sweep_csv(const RunConfig& cfg, std::uint64_t master_seed);

inline constexpr const char* kSweepHeader =
    "scenario,axis,value,p_md,p_md_err,p_fa,cop,cop_err,p_out,p_out_err,p_suc,p_suc_err,seed";

struct ValidationRow {
    std::string metric;
    double zeta = 0.0;
    MetricValue analytic;
    MetricValue oracle;
    double gap = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    [[nodiscard]] bool all_pass() const;
    [[nodiscard]] std::string csv() const;
    [[nodiscard]] std::string summary() const;
};

/// Analytic copula metrics against the correlated-Rayleigh oracle: P_MD over
/// the validation zeta grid (warden) and P_out (receiver). Tolerance per row
/// is the copula allowance (multi-port nodes only) plus both error estimates.
ValidationReport run_validation(const RunConfig& cfg);

/// 17 significant digits, as written to CSV.
std::string format_real(double v);

} // namespace covertfas
