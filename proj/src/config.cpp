#include "covertfas/config.hpp"

#include "covertfas/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace covertfas {

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

namespace {

constexpr std::string_view kAxisNames[] = {"zeta", "p_a_dbm", "n_ports_w", "n_ports_b",
                                           "w_aperture"};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view text, int line, std::string_view key) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ConfigError(line, "'" + std::string(key) + "' expects a finite number, got '" +
                                    std::string(text) + "'");
    return v;
}

template <class Int>
Int parse_integer(std::string_view text, int line, std::string_view key) {
    Int v{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(line, "'" + std::string(key) + "' expects an integer, got '" +
                                    std::string(text) + "'");
    return v;
}

std::vector<std::string> parse_list(std::string_view text) {
    std::vector<std::string> items;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        if (!item.empty()) items.emplace_back(item);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return items;
}

[[noreturn]] void unknown_key(std::string_view key, int line) {
    throw ConfigError(line, "unknown key '" + std::string(key) + "'");
}

void assign_node(NodeFas& node, std::string_view key, std::string_view value, int line,
                 std::string_view full) {
    if (key == "n1") node.grid.n1_count = parse_integer<int>(value, line, full);
    else if (key == "n2") node.grid.n2_count = parse_integer<int>(value, line, full);
    else if (key == "w1") node.grid.w1 = parse_real(value, line, full);
    else if (key == "w2") node.grid.w2 = parse_real(value, line, full);
    else if (key == "nu") node.nu = parse_real(value, line, full);
    else if (key == "kernel") {
        if (value == "jakes_j0") node.kernel = BesselKernel::jakes_j0;
        else if (value == "spherical_sinc") node.kernel = BesselKernel::spherical_sinc;
        else throw ConfigError(line, "kernel must be jakes_j0 or spherical_sinc");
    } else if (key == "dependence") {
        if (value == "field_rho") node.dependence = Dependence::field_rho;
        else if (value == "gain_rho_sq") node.dependence = Dependence::gain_rho_sq;
        else throw ConfigError(line, "dependence must be field_rho or gain_rho_sq");
    } else unknown_key(full, line);
}

} // namespace

std::string_view to_string(SweepAxis axis) { return kAxisNames[static_cast<int>(axis)]; }

SweepAxis parse_sweep_axis(std::string_view text) {
    for (int i = 0; i < 5; ++i)
        if (kAxisNames[i] == text) return static_cast<SweepAxis>(i);
    throw ConfigError(0, "unknown sweep axis '" + std::string(text) + "'");
}

void SweepSpec::validate() const {
    if (!(start < stop)) throw DomainError("sweep: start must be < stop");
    if (points < 2) throw DomainError("sweep: points must be >= 2");
}

std::vector<double> SweepSpec::grid() const {
    std::vector<double> values(points);
    for (int i = 0; i < points; ++i)
        values[i] = i + 1 == points ? stop : start + (stop - start) * i / (points - 1);
    if (axis == SweepAxis::n_ports_w || axis == SweepAxis::n_ports_b)
        for (auto& v : values) v = std::round(v);
    return values;
}

void ValidateSpec::validate() const {
    if (!(zeta_start < zeta_stop)) throw DomainError("validate: zeta_start must be < zeta_stop");
    if (points < 2) throw DomainError("validate: points must be >= 2");
    if (!(copula_tolerance >= 0.0)) throw DomainError("validate: copula_tolerance must be >= 0");
}

LinkBudget RunConfig::link() const {
    return LinkBudget{dbm_to_watts(p_a_dbm), db_to_linear(sigma2_w_db), db_to_linear(sigma2_b_db),
                      r_b, mu};
}

double RunConfig::evaluation_zeta() const { return zeta.value_or(optimal_threshold(link())); }

void RunConfig::validate() const {
    link().validate();
    bob.validate();
    willie.validate();
    sweep.validate();
    validation.validate();
    mc.validate();
    qmc.validate();
    for (const auto& name : sweep.scenarios)
        if (!scenarios.contains(name))
            throw ConfigError(0, "sweep references undefined scenario '" + name + "'");
    for (const auto& [name, scenario] : scenarios) resolve_scenario(*this, scenario);
}

void apply_assignment(RunConfig& cfg, std::string_view full, std::string_view value, int line) {
    const auto dot = full.find('.');
    if (dot == std::string_view::npos) unknown_key(full, line);
    const auto section = full.substr(0, dot);
    const auto key = full.substr(dot + 1);

    if (section == "link") {
        if (key == "p_a_dbm") cfg.p_a_dbm = parse_real(value, line, full);
        else if (key == "sigma2_w_db") cfg.sigma2_w_db = parse_real(value, line, full);
        else if (key == "sigma2_b_db") cfg.sigma2_b_db = parse_real(value, line, full);
        else if (key == "r_b") cfg.r_b = parse_real(value, line, full);
        else if (key == "mu") cfg.mu = parse_real(value, line, full);
        else if (key == "zeta") {
            if (value == "optimal") cfg.zeta.reset();
            else cfg.zeta = parse_real(value, line, full);
        } else unknown_key(full, line);
    } else if (section == "bob") {
        assign_node(cfg.bob, key, value, line, full);
    } else if (section == "willie") {
        assign_node(cfg.willie, key, value, line, full);
    } else if (section == "sweep") {
        if (key == "axis") {
            try {
                cfg.sweep.axis = parse_sweep_axis(value);
            } catch (const ConfigError& e) {
                throw ConfigError(line, e.what());
            }
        } else if (key == "start") cfg.sweep.start = parse_real(value, line, full);
        else if (key == "stop") cfg.sweep.stop = parse_real(value, line, full);
        else if (key == "points") cfg.sweep.points = parse_integer<int>(value, line, full);
        else if (key == "scenarios") cfg.sweep.scenarios = parse_list(value);
        else unknown_key(full, line);
    } else if (section == "mc") {
        if (key == "trials") cfg.mc.trials = parse_integer<std::uint64_t>(value, line, full);
        else if (key == "seed") cfg.mc.seed = parse_integer<std::uint64_t>(value, line, full);
        else if (key == "symbols_per_slot")
            cfg.mc.symbols_per_slot = parse_integer<std::uint64_t>(value, line, full);
        else unknown_key(full, line);
    } else if (section == "qmc") {
        if (key == "target_abs_error") cfg.qmc.target_abs_error = parse_real(value, line, full);
        else if (key == "max_points")
            cfg.qmc.max_points = parse_integer<std::uint64_t>(value, line, full);
        else if (key == "shifts") cfg.qmc.shifts = parse_integer<int>(value, line, full);
        else if (key == "seed") cfg.qmc.seed = parse_integer<std::uint64_t>(value, line, full);
        else unknown_key(full, line);
    } else if (section == "validate") {
        if (key == "zeta_start") cfg.validation.zeta_start = parse_real(value, line, full);
        else if (key == "zeta_stop") cfg.validation.zeta_stop = parse_real(value, line, full);
        else if (key == "points") cfg.validation.points = parse_integer<int>(value, line, full);
        else if (key == "copula_tolerance")
            cfg.validation.copula_tolerance = parse_real(value, line, full);
        else unknown_key(full, line);
    } else {
        throw ConfigError(line, "unknown section '" + std::string(section) + "'");
    }
}

RunConfig resolve_scenario(const RunConfig& base, const Scenario& scenario) {
    RunConfig cfg = base;
    for (const auto& a : scenario.overrides) {
        const std::string_view key = a.key;
        if (!key.starts_with("link.") && !key.starts_with("bob.") && !key.starts_with("willie."))
            throw ConfigError(a.line, "scenario '" + scenario.name +
                                          "' may only override link.*, bob.* or willie.* keys");
        apply_assignment(cfg, key, a.value, a.line);
    }
    return cfg;
}

RunConfig parse_config(std::string_view text, RunConfig base) {
    RunConfig cfg = std::move(base);
    std::string section;
    Scenario* scenario = nullptr;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            scenario = nullptr;
            if (section.starts_with("scenario.")) {
                const std::string name = section.substr(9);
                if (name.empty()) throw ConfigError(line_no, "scenario section needs a name");
                auto& slot = cfg.scenarios[name];
                slot = Scenario{name, {}};
                scenario = &slot;
            } else if (section != "link" && section != "bob" && section != "willie" &&
                       section != "sweep" && section != "mc" && section != "qmc" &&
                       section != "validate") {
                throw ConfigError(line_no, "unknown section '" + section + "'");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "empty key");
        if (section.empty()) throw ConfigError(line_no, "assignment outside of any section");

        if (scenario) {
            // Checked now for syntax; applied when the scenario is resolved.
            RunConfig probe = cfg;
            const Assignment a{std::string(key), std::string(value), line_no};
            resolve_scenario(probe, Scenario{scenario->name, {a}});
            scenario->overrides.push_back(a);
        } else {
            apply_assignment(cfg, section + "." + std::string(key), value, line_no);
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot read config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::move(base));
}

RunConfig paper_sec4_preset(SweepAxis axis) {
    RunConfig cfg; // defaults already hold the parameter set
    auto add = [&](std::string name, std::vector<std::pair<std::string, std::string>> kv) {
        Scenario s{name, {}};
        for (auto& [k, v] : kv) s.overrides.push_back({std::move(k), std::move(v), 0});
        cfg.scenarios[name] = std::move(s);
    };
    const std::vector<std::pair<std::string, std::string>> fpa_willie = {
        {"willie.n1", "1"}, {"willie.n2", "1"}, {"willie.w1", "0"}, {"willie.w2", "0"}};
    const std::vector<std::pair<std::string, std::string>> fpa_bob = {
        {"bob.n1", "1"}, {"bob.n2", "1"}, {"bob.w1", "0"}, {"bob.w2", "0"}};
    auto concat = [](auto a, const auto& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };

    // Threshold sweep: FAS vs FPA warden at two transmit powers.
    add("fas-20dBm", {{"link.p_a_dbm", "20"}});
    add("fpa-20dBm", concat(fpa_willie, std::vector<std::pair<std::string, std::string>>{
                                            {"link.p_a_dbm", "20"}}));
    add("fas-25dBm", {{"link.p_a_dbm", "25"}});
    add("fpa-25dBm", concat(fpa_willie, std::vector<std::pair<std::string, std::string>>{
                                            {"link.p_a_dbm", "25"}}));

    // Transmit-power sweep: enlarge Bob, Willie, or both (3x3 ports over 2x2
    // wavelengths), against the 2x2 baseline and the all-FPA benchmark.
    const std::vector<std::pair<std::string, std::string>> bob_up = {
        {"bob.n1", "3"}, {"bob.n2", "3"}, {"bob.w1", "2"}, {"bob.w2", "2"}};
    const std::vector<std::pair<std::string, std::string>> willie_up = {
        {"willie.n1", "3"}, {"willie.n2", "3"}, {"willie.w1", "2"}, {"willie.w2", "2"}};
    add("fpa", concat(fpa_bob, fpa_willie));
    add("fas", {});
    add("bob-up", bob_up);
    add("willie-up", willie_up);
    add("both-up", concat(bob_up, willie_up));

    cfg.sweep.axis = axis;
    switch (axis) {
    case SweepAxis::zeta:
        cfg.sweep.start = 1.01;
        cfg.sweep.stop = 6.0;
        cfg.sweep.points = 50;
        cfg.sweep.scenarios = {"fas-20dBm", "fpa-20dBm", "fas-25dBm", "fpa-25dBm"};
        break;
    case SweepAxis::p_a_dbm:
        cfg.sweep.start = 0.0;
        cfg.sweep.stop = 40.0;
        cfg.sweep.points = 41;
        cfg.sweep.scenarios = {"fpa", "fas", "bob-up", "willie-up", "both-up"};
        break;
    case SweepAxis::n_ports_w:
    case SweepAxis::n_ports_b:
        cfg.sweep.start = 1.0;
        cfg.sweep.stop = 8.0;
        cfg.sweep.points = 8;
        cfg.sweep.scenarios = {"fas"};
        break;
    case SweepAxis::w_aperture:
        cfg.sweep.start = 0.1;
        cfg.sweep.stop = 3.0;
        cfg.sweep.points = 30;
        cfg.sweep.scenarios = {"fas"};
        break;
    }
    return cfg;
}

} // namespace covertfas
