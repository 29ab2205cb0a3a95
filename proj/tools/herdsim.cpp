#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "herdsim/cli.hpp"

namespace {

bool parse_switch(const std::string& v)
{
    return v == "on" || v == "true" || v == "1";
}

} // namespace

int main(int argc, char** argv)
{
    using namespace herdsim;
    CLI::App app{"Deterministic 2-D herding simulator"};
    app.require_subcommand(1);

    SimulateOptions sim;
    std::optional<long> seed;
    std::string sim_svg = "on";
    auto* simulate = app.add_subcommand("simulate", "Run a scenario and write trace, summary and plots");
    simulate->add_option("--scenario", sim.scenario, "Scenario JSON file")->required();
    simulate->add_option("--out", sim.out_dir, "Output directory")->capture_default_str();
    simulate->add_option("--dt", sim.dt, "Override the time step [s]")->check(CLI::PositiveNumber);
    simulate->add_option("--t-max", sim.t_max, "Override the time limit [s]")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, "Reserved; the dynamics are deterministic");
    simulate->add_option("--svg", sim_svg, "Write SVG plots (on|off)")
        ->check(CLI::IsMember({"on", "off", "true", "false", "1", "0"}))
        ->capture_default_str();

    SweepOptions sw;
    std::string sweep_svg_flag = "on";
    auto* sweep = app.add_subcommand("sweep", "Worst-case sweep of the obstacle-following field");
    sweep->add_option("--scenario", sw.scenario, "Scenario JSON file")->required();
    sweep->add_option("--obstacle", sw.obstacle, "Obstacle index")->capture_default_str();
    sweep->add_option("--resolution", sw.resolution, "Grid cells per axis (>= 64)")->capture_default_str();
    sweep->add_option("--margin", sw.margin, "Required distance from pi [rad]")->capture_default_str();
    sweep->add_option("--out", sw.out_dir, "Output directory")->capture_default_str();
    sweep->add_option("--svg", sweep_svg_flag, "Write the SVG heatmap (on|off)")
        ->check(CLI::IsMember({"on", "off", "true", "false", "1", "0"}))
        ->capture_default_str();

    std::string check_path;
    auto* check = app.add_subcommand("check", "Validate a scenario and print derived quantities");
    check->add_option("--scenario", check_path, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    const Log log(log_level_from_env());
    try {
        if (*simulate) {
            sim.svg = parse_switch(sim_svg);
            return cmd_simulate(sim, log);
        }
        if (*sweep) {
            sw.svg = parse_switch(sweep_svg_flag);
            return cmd_sweep(sw, log);
        }
        return cmd_check(check_path, std::cout, log);
    } catch (const std::exception& e) {
        log.info("error: {}", e.what());
        return kExitInternal;
    }
}
