#pragma once

// Run configuration: an INI-style key/value file with sections [link], [bob],
// [willie], [sweep], [mc], [qmc], [validate] and any number of
// [scenario.NAME] blocks. Powers are entered in dB/dBm.

#include "covertfas/covert_metrics.hpp"
#include "covertfas/mc_oracle.hpp"
#include "covertfas/mvt.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace covertfas {

/// Malformed configuration text. line() is 1-based; 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message);
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

enum class SweepAxis { zeta, p_a_dbm, n_ports_w, n_ports_b, w_aperture };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view text);

/// One `key = value` assignment, remembered with its source line.
struct Assignment {
    std::string key;
    std::string value;
    int line = 0;
};

/// Named overrides applied on top of the base configuration. Keys are
/// qualified: `link.p_a_dbm`, `bob.n1`, `willie.w2`, ...
struct Scenario {
    std::string name;
    std::vector<Assignment> overrides;
};

struct SweepSpec {
    SweepAxis axis = SweepAxis::zeta;
    double start = 1.01;
    double stop = 6.0;
    int points = 50;
    std::vector<std::string> scenarios;

    void validate() const;
    [[nodiscard]] std::vector<double> grid() const;
};

struct ValidateSpec {
    double zeta_start = 1.25;
    double zeta_stop = 6.0;
    int points = 20;
    double copula_tolerance = 0.03;

    void validate() const;
};

struct RunConfig {
    // Entered values, in decibels where applicable.
    double p_a_dbm = 20.0;
    double sigma2_w_db = 0.0;
    double sigma2_b_db = -20.0;
    double r_b = 0.5;
    double mu = 0.01;
    std::optional<double> zeta; // linear; defaults to the optimal threshold

    NodeFas bob{PortGrid(2, 2, 1.0, 1.0)};
    NodeFas willie{PortGrid(2, 2, 1.0, 1.0)};

    SweepSpec sweep;
    ValidateSpec validation;
    McSettings mc;
    QmcSettings qmc;
    std::map<std::string, Scenario> scenarios;

    /// Linear-scale budget: dBm is watt-referenced, noise dB relative to 1 W.
    [[nodiscard]] LinkBudget link() const;
    [[nodiscard]] double evaluation_zeta() const;
    void validate() const;
};

/// mu = 0.01, nu = 40, sigma_w^2 = 0 dB, sigma_b^2 = -20 dB, R_b = 0.5,
/// 2x2 ports over 1x1 wavelengths at both nodes, P_a = 20 dBm, plus the
/// scenario catalog for the threshold and transmit-power sweeps. The sweep
/// range and scenario list follow `axis`.
RunConfig paper_sec4_preset(SweepAxis axis = SweepAxis::zeta);

/// Assign one qualified key (`section.key`) on cfg.
void apply_assignment(RunConfig& cfg, std::string_view qualified_key, std::string_view value,
                      int line);

/// Overlay the text on `base`. Throws ConfigError on syntax, unknown keys and
/// unparseable values. Does not check invariants; call RunConfig::validate().
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Base config with the scenario's overrides applied.
RunConfig resolve_scenario(const RunConfig& base, const Scenario& scenario);

} // namespace covertfas
