#pragma once

#include <optional>
#include <string>
#include <vector>

#include "herdsim/environment.hpp"
#include "herdsim/geom.hpp"

namespace herdsim {

struct AttackerConfig {
    Vec2 position;
    double radius = 0.1;               // rho_a
    double max_speed = 0.5;            // v_max_a
    std::optional<double> speed;       // defaults to max_speed
    double sensing_radius = 10.0;      // rho_a^s
    double deadlock_escape = 0.05;     // epsilon_a
    double deadlock_tolerance = 1e-6;  // |F^a| below this counts as zero

    double cruise_speed() const { return speed.value_or(max_speed); }
};

struct DefenderConfig {
    std::vector<Vec2> positions;
    double radius = 0.1;               // rho_d
    std::vector<double> max_speeds;    // one per defender
    double sensing_zone_radius = 50.0; // rho_d^s around the protected area

    std::size_t count() const { return positions.size(); }
    double slowest() const
    {
        double v = max_speeds.empty() ? 0.0 : max_speeds.front();
        for (double s : max_speeds) {
            v = s < v ? s : v;
        }
        return v;
    }
};

struct FormationConfig {
    double spread = 1.8;                     // Delta
    double arc_radius = 0.55;                // R_ad
    double attacker_min = 0.3;               // R_d^{a,m}
    std::optional<double> attacker_bar;      // defaults to 2 R_ad - R_d^{a,m}
    double attacker_outer = 0.9;             // R_d^{a,u}
    double peer_min = 0.2;                   // R_d^{d,m}
    std::optional<double> peer_bar;          // defaults to 1.5 R_d^{d,m}
    std::optional<double> peer_outer;        // defaults to 2 R_d^{d,m}
    double safe_margin = 0.2;                // R_safe
    std::optional<double> defender_margin;   // R_safe_d, defaults to R_safe / 2
};

struct HeadingConfig {
    double transition_time = 9.0;       // Delta T_t
    double capture_offset = 0.05;       // epsilon_s
    double psi_prime_rate_max = 2.0;    // rad/s
};

struct ControllerConfig {
    double exponent = 0.5;              // k_d2
    double goal_tolerance = 0.01;       // |e| below which a goal counts as reached
    double solver_tolerance = 1e-12;
};

struct IntegratorConfig {
    double dt = 0.01;
    double t_max = 300.0;
    std::optional<double> capture_dwell; // defaults to 2 Delta T_t
};

struct ShellConfig {
    double bar_fraction = 0.25;
    double outer_fraction = 0.5;
    double attacker_bar_factor = 1.15;
    double attacker_outer_factor = 1.3;
    double solver_tolerance = 1e-10;
    int solver_max_iterations = 500;
};

/// Full world description. Lengths in meters, angles in radians, speeds in m/s.
struct ScenarioConfig {
    std::string name = "scenario";
    Disc protected_area{{0.0, 0.0}, 2.0};
    Disc safe_area{{-5.0, 60.0}, 5.0};
    std::vector<ObstacleSpec> obstacles;
    AttackerConfig attacker;
    DefenderConfig defenders;
    FormationConfig formation;
    HeadingConfig heading;
    ControllerConfig controller;
    IntegratorConfig integrator;
    ShellConfig shells;

    double formation_radius() const { return formation.arc_radius + defenders.radius; }
    double defender_margin() const { return formation.defender_margin.value_or(formation.safe_margin / 2.0); }
    double capture_dwell() const { return integrator.capture_dwell.value_or(2.0 * heading.transition_time); }

    BlendTriplet attacker_defender_triplet() const
    {
        return {formation.attacker_min,
                formation.attacker_bar.value_or(2.0 * formation.arc_radius - formation.attacker_min),
                formation.attacker_outer};
    }

    BlendTriplet peer_triplet() const
    {
        return {formation.peer_min, formation.peer_bar.value_or(1.5 * formation.peer_min),
                formation.peer_outer.value_or(2.0 * formation.peer_min)};
    }

    ShellParams shell_params() const
    {
        ShellParams p;
        p.formation_radius = formation_radius();
        p.formation_clearance = formation.safe_margin;
        p.defender_radius = defenders.radius;
        p.defender_clearance = defender_margin();
        p.bar_fraction = shells.bar_fraction;
        p.outer_fraction = shells.outer_fraction;
        p.attacker_bar_factor = shells.attacker_bar_factor;
        p.attacker_outer_factor = shells.attacker_outer_factor;
        p.solver_tolerance = shells.solver_tolerance;
        p.solver_max_iterations = shells.solver_max_iterations;
        return p;
    }
};

} // namespace herdsim
