#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "herdsim/report.hpp"
#include "herdsim/scenario_io.hpp"
#include "herdsim/sim.hpp"
#include "herdsim/validation.hpp"

namespace herdsim {

inline constexpr const char* kToolVersion = "0.1.0";

/// Process exit statuses. Stable across releases.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,     // unexpected failure, including non-finite state
    kExitUsage = 2,        // bad flags, obstacle index out of range, sweep resolution too low
    kExitMissingFile = 3,  // scenario file cannot be read
    kExitSchema = 4,       // malformed JSON or schema mismatch
    kExitValidation = 5,   // scenario violates a standing assumption
    kExitSafety = 6,       // simulate: a safety ratio reached 1, a speed bound broke, or no capture
    kExitSweep = 7,        // sweep: |dbeta| came within the margin of pi
};

enum class LogLevel { Quiet, Info, Debug };

/// HERDSIM_LOG = quiet | info | debug (default info). Logs go to stderr.
inline LogLevel log_level_from_env()
{
    const char* v = std::getenv("HERDSIM_LOG");
    if (v == nullptr) {
        return LogLevel::Info;
    }
    const std::string s(v);
    if (s == "quiet" || s == "0" || s == "off") {
        return LogLevel::Quiet;
    }
    if (s == "debug" || s == "2") {
        return LogLevel::Debug;
    }
    return LogLevel::Info;
}

class Log {
public:
    explicit Log(LogLevel level, std::ostream& sink = std::cerr) : level_(level), sink_(sink) {}

    template <class... Args>
    void info(fmt::format_string<Args...> f, Args&&... args) const
    {
        if (level_ != LogLevel::Quiet) {
            sink_ << fmt::format(f, std::forward<Args>(args)...) << '\n';
        }
    }

    template <class... Args>
    void debug(fmt::format_string<Args...> f, Args&&... args) const
    {
        if (level_ == LogLevel::Debug) {
            sink_ << fmt::format(f, std::forward<Args>(args)...) << '\n';
        }
    }

private:
    LogLevel level_;
    std::ostream& sink_;
};

inline std::string sha256_hex(const std::string& bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += fmt::format("{:02x}", digest[i]);
    }
    return hex;
}

/// Ties artifacts to the exact scenario bytes that produced them.
struct RunManifest {
    std::string scenario_path;
    std::string config_hash; // SHA-256 of the scenario file bytes
    std::string tool_version = kToolVersion;
    std::vector<std::string> outputs;
    nlohmann::ordered_json overrides = nlohmann::ordered_json::object();

    nlohmann::ordered_json to_json() const
    {
        return {{"scenario_path", scenario_path},
                {"config_hash_sha256", config_hash},
                {"tool_version", tool_version},
                {"overrides", overrides},
                {"outputs", outputs}};
    }
};

struct SimulateOptions {
    std::string scenario;
    std::string out_dir = "out";
    std::optional<double> dt;
    std::optional<double> t_max;
    bool svg = true;
};

struct SweepOptions {
    std::string scenario;
    std::string out_dir = "out";
    long obstacle = 0;
    int resolution = 128;
    double margin = 0.1;
    bool svg = true;
};

namespace cli_detail {

struct Loaded {
    ScenarioConfig cfg;
    std::string hash;
};

// Loads and parses; on failure logs and sets `code`.
inline std::optional<Loaded> load(const std::string& path, const Log& log, int& code)
{
    try {
        const std::string bytes = read_file(path);
        return Loaded{parse_scenario(bytes), sha256_hex(bytes)};
    } catch (const FileError& e) {
        log.info("error: {}", e.what());
        code = kExitMissingFile;
    } catch (const SchemaError& e) {
        log.info("error: {}: {}", path, e.what());
        code = kExitSchema;
    }
    return std::nullopt;
}

inline bool report_violations(const std::vector<Violation>& vs, const Log& log)
{
    for (const Violation& v : vs) {
        log.info("{} [{}]: {}", to_string(v.severity), v.code, v.message);
    }
    return has_errors(vs);
}

inline void write_text(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) {
        throw Error("cannot write " + p.string());
    }
    f << text;
}

inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

} // namespace cli_detail

inline int cmd_simulate(const SimulateOptions& opt, const Log& log)
{
    namespace fs = std::filesystem;
    int code = kExitOk;
    auto loaded = cli_detail::load(opt.scenario, log, code);
    if (!loaded) {
        return code;
    }
    ScenarioConfig cfg = loaded->cfg;
    RunManifest manifest;
    manifest.scenario_path = opt.scenario;
    manifest.config_hash = loaded->hash;
    if (opt.dt) {
        cfg.integrator.dt = *opt.dt;
        manifest.overrides["dt_s"] = *opt.dt;
    }
    if (opt.t_max) {
        cfg.integrator.t_max = *opt.t_max;
        manifest.overrides["t_max_s"] = *opt.t_max;
    }
    if (cli_detail::report_violations(validate_scenario(cfg), log)) {
        return kExitValidation;
    }
    try {
        const World world = prepare_world(cfg);
        log.info("simulating '{}' with dt = {} s, t_max = {} s", cfg.name, cfg.integrator.dt, cfg.integrator.t_max);
        const SimTrace trace = run(world);
        fs::create_directories(opt.out_dir);
        const fs::path dir(opt.out_dir);

        std::ostringstream csv;
        write_trace_csv(csv, trace, cfg.defenders.count());
        cli_detail::write_text(dir / "trace.csv", csv.str());
        manifest.outputs.push_back((dir / "trace.csv").string());
        cli_detail::write_text(dir / "summary.json", cli_detail::dump(summary_json(trace, world)));
        manifest.outputs.push_back((dir / "summary.json").string());
        if (opt.svg) {
            cli_detail::write_text(dir / "trajectory.svg", trajectory_svg(trace, world));
            cli_detail::write_text(dir / "ratios.svg", ratio_svg(trace));
            manifest.outputs.push_back((dir / "trajectory.svg").string());
            manifest.outputs.push_back((dir / "ratios.svg").string());
        }
        manifest.outputs.push_back((dir / "manifest.json").string());
        cli_detail::write_text(dir / "manifest.json", cli_detail::dump(manifest.to_json()));

        const Events& ev = trace.events();
        log.info("stop: {} at t = {:.2f} s after {} steps", to_string(trace.stop), trace.final_state.t,
                 trace.rows.size());
        log.debug("events: sense {}, defenders converged {}, safe entry {}",
                  ev.sense ? fmt::format("{:.2f}", *ev.sense) : "-",
                  ev.defenders_converged ? fmt::format("{:.2f}", *ev.defenders_converged) : "-",
                  ev.safe_entry ? fmt::format("{:.2f}", *ev.safe_entry) : "-");
        const SafetySnapshot& m = trace.max_safety;
        log.info("max ratios: E_ao {:.4f}, E_do {:.4f}, R_dd {:.4f}, R_ad {:.4f}; max defender speed ratio {:.4f}",
                 m.attacker_obstacle, m.defender_obstacle, m.defender_defender, m.attacker_defender,
                 trace.max_defender_speed_ratio);
        const bool ok = trace.captured() && m.safe() && trace.max_defender_speed_ratio <= 1.0 + 1e-12 &&
                        trace.final_state.safe_exits == 0;
        return ok ? kExitOk : kExitSafety;
    } catch (const IntegrityError& e) {
        log.info("error: {}", e.what());
        return kExitInternal;
    } catch (const ConfigError& e) {
        log.info("error: {}", e.what());
        return kExitValidation;
    }
}

inline int cmd_sweep(const SweepOptions& opt, const Log& log)
{
    namespace fs = std::filesystem;
    int code = kExitOk;
    auto loaded = cli_detail::load(opt.scenario, log, code);
    if (!loaded) {
        return code;
    }
    if (opt.resolution < kMinSweepResolution) {
        log.info("error: resolution {} is below the minimum {}", opt.resolution, kMinSweepResolution);
        return kExitUsage;
    }
    std::vector<Obstacle> obstacles;
    try {
        obstacles = derive_obstacles(loaded->cfg.obstacles, loaded->cfg.shell_params());
    } catch (const Error& e) {
        log.info("error: {}", e.what());
        return kExitValidation;
    }
    if (opt.obstacle < 0 || static_cast<std::size_t>(opt.obstacle) >= obstacles.size()) {
        log.info("error: obstacle index {} out of range (scenario has {})", opt.obstacle, obstacles.size());
        return kExitUsage;
    }
    const auto k = static_cast<std::size_t>(opt.obstacle);
    const Obstacle& ob = obstacles[k];
    const SweepReport rep = singularity_sweep(ob, opt.resolution, opt.margin);
    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    const std::string stem = fmt::format("sweep_obstacle{}", k);
    std::ostringstream csv;
    write_sweep_csv(csv, rep);
    cli_detail::write_text(dir / (stem + ".csv"), csv.str());
    cli_detail::write_text(dir / (stem + ".json"), cli_detail::dump(sweep_summary_json(rep, k, ob)));
    if (opt.svg) {
        cli_detail::write_text(dir / (stem + ".svg"), sweep_svg(rep));
    }
    log.info("obstacle {}: dbeta in [{:.4f}, {:.4f}] rad, limit {:.4f}: {}", k, rep.global_min, rep.global_max,
             kPi - rep.margin, rep.passed ? "pass" : "FAIL");
    return rep.passed ? kExitOk : kExitSweep;
}

/// Prints violations and the derived-quantity table; 0 iff no violation at all.
inline int cmd_check(const std::string& scenario, std::ostream& out, const Log& log)
{
    int code = kExitOk;
    auto loaded = cli_detail::load(scenario, log, code);
    if (!loaded) {
        return code;
    }
    const ScenarioConfig& cfg = loaded->cfg;
    const std::vector<Violation> vs = validate_scenario(cfg);
    for (const Violation& v : vs) {
        out << fmt::format("{} [{}]: {}\n", to_string(v.severity), v.code, v.message);
    }
    out << fmt::format("scenario: {}\nconfig sha256: {}\n", cfg.name, loaded->hash);
    const std::size_t nd = cfg.defenders.count();
    if (nd >= 2) {
        out << fmt::format("Delta_min: {:.6f} rad (Delta = {:.6f})\n",
                           minimum_spread(static_cast<int>(nd), cfg.formation.peer_min, cfg.formation.attacker_min),
                           cfg.formation.spread);
        out << fmt::format("M: {:.6f}\n", arc_magnitude(static_cast<int>(nd), cfg.formation.spread));
    }
    if (cfg.attacker.max_speed > 0.0) {
        out << fmt::format("T_a_c: {:.4f} s\n",
                           distance(cfg.attacker.position, cfg.protected_area.center) / cfg.attacker.max_speed);
    }
    try {
        const auto obstacles = derive_obstacles(cfg.obstacles, cfg.shell_params());
        out << "obstacle  n         xi_m       xi_bar     xi_u       xi_d_m     R_a_m      R_a_u\n";
        for (std::size_t k = 0; k < obstacles.size(); ++k) {
            const Obstacle& ob = obstacles[k];
            out << fmt::format("{:<9} {:<9.6f} {:<10.6f} {:<10.6f} {:<10.6f} {:<10.6f} {:<10.6f} {:.6f}\n", k,
                               ob.n, ob.xi_m(), ob.formation.delta_bar, ob.xi_u(), ob.defender.delta_m,
                               ob.attacker.delta_m, ob.attacker.delta_u);
        }
    } catch (const Error& e) {
        out << fmt::format("obstacles: {}\n", e.what());
    }
    for (std::size_t j = 0; j < cfg.defenders.max_speeds.size(); ++j) {
        try {
            const TrackingGains g =
                solve_tracking_params(cfg.controller.exponent, cfg.defenders.max_speeds[j], cfg.attacker.max_speed,
                                      cfg.formation.arc_radius, cfg.heading.psi_prime_rate_max,
                                      cfg.controller.solver_tolerance);
            out << fmt::format("defender {}: k_d0 {:.6f}, k_d1 {:.6f}, k_d2 {:.3f}, e_t {:.6f} m\n", j, g.k_d0,
                               g.k_d1, g.k_d2, g.e_t);
        } catch (const Error& e) {
            out << fmt::format("defender {}: {}\n", j, e.what());
        }
    }
    return vs.empty() ? kExitOk : kExitValidation;
}

} // namespace herdsim
