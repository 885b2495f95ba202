// covertfas: evaluate, sweep and validate covert FAS link metrics.
//
//   covertfas eval     --config run.ini [--seed N] [--preset paper-sec4]
//   covertfas sweep    --config run.ini --out sweep.csv [--axis p_a_dbm]
//   covertfas validate --config run.ini --out report.csv
//
// Exit codes: 0 ok, 1 validation failed, 2 config parse error,
// 3 invariant violation, 4 I/O error.

#include "covertfas/commands.hpp"
#include "covertfas/errors.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace covertfas;

struct Options {
    std::string config_path;
    std::string out_path;
    std::string preset;
    std::string axis;
    std::optional<std::uint64_t> seed;
};

RunConfig resolve_config(const Options& opt) {
    RunConfig cfg;
    if (!opt.preset.empty()) {
        if (opt.preset != "paper-sec4") throw ConfigError(0, "unknown preset '" + opt.preset + "'");
        cfg = paper_sec4_preset(opt.axis.empty() ? SweepAxis::zeta : parse_sweep_axis(opt.axis));
    } else if (opt.config_path.empty()) {
        throw ConfigError(0, "either --config or --preset is required");
    }
    if (!opt.config_path.empty()) cfg = load_config(opt.config_path, std::move(cfg));
    if (!opt.axis.empty() && opt.preset.empty()) cfg.sweep.axis = parse_sweep_axis(opt.axis);
    if (opt.seed) {
        cfg.qmc.seed = *opt.seed;
        cfg.mc.seed = *opt.seed;
    }
    return cfg;
}

int write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open '" << path << "' for writing\n";
        return kExitIoError;
    }
    out << text;
    out.close();
    if (!out) {
        std::cerr << "error: failed writing '" << path << "'\n";
        return kExitIoError;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Covert communication metrics for fluid-antenna links"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "INI configuration file");
        sub->add_option("--preset", opt.preset, "Built-in parameter set (paper-sec4)");
        sub->add_option("--seed", opt.seed, "Master seed (overrides [qmc] and [mc] seeds)");
    };
    auto* eval = app.add_subcommand("eval", "Evaluate all metrics at one point (JSON)");
    add_common(eval);
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
    add_common(sweep);
    sweep->add_option("--out", opt.out_path, "Output CSV path (stdout if omitted)");
    sweep->add_option("--axis", opt.axis, "Sweep axis: zeta|p_a_dbm|n_ports_w|n_ports_b|w_aperture");
    auto* validate = app.add_subcommand("validate", "Compare analytic metrics to Monte Carlo");
    add_common(validate);
    validate->add_option("--out", opt.out_path, "Output CSV path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParseError;
    }

    try {
        const RunConfig cfg = resolve_config(opt);
        cfg.validate();
        if (*eval) {
            std::cout << eval_record(cfg, cfg.qmc.seed).dump(2) << '\n';
            return kExitOk;
        }
        if (*sweep) return write_output(opt.out_path, sweep_csv(cfg, cfg.qmc.seed));
        const ValidationReport report = run_validation(cfg);
        if (const int rc = write_output(opt.out_path, report.csv()); rc != kExitOk) return rc;
        (opt.out_path.empty() ? std::cerr : std::cout) << report.summary();
        return report.all_pass() ? kExitOk : kExitValidationFailed;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitParseError;
    } catch (const DomainError& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kExitInvariantViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvariantViolation;
    }
}
