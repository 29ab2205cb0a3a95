#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "herdsim/attacker.hpp"
#include "herdsim/defender_control.hpp"
#include "herdsim/environment.hpp"
#include "herdsim/herding.hpp"
#include "herdsim/scenario.hpp"

namespace herdsim {

enum class Severity { Warning, Error };

inline const char* to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

struct Violation {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
};

inline bool has_errors(const std::vector<Violation>& v)
{
    return std::any_of(v.begin(), v.end(), [](const Violation& x) { return x.severity == Severity::Error; });
}

inline constexpr int kShellSamples = 720;

namespace detail {

// True if any sampled point of a's outer contour lies in b's outer shell.
inline bool outer_shells_touch(const Obstacle& a, const Obstacle& b)
{
    if (superelliptic_distance(a.center, b) <= b.xi_u() || superelliptic_distance(b.center, a) <= a.xi_u()) {
        return true;
    }
    for (int i = 0; i < kShellSamples; ++i) {
        const double beta = kTwoPi * i / kShellSamples;
        if (superelliptic_distance(contour_point(beta, a, a.xi_u()), b) <= b.xi_u() ||
            superelliptic_distance(contour_point(beta, b, b.xi_u()), a) <= a.xi_u()) {
            return true;
        }
    }
    return false;
}

inline bool disc_touches_shell(const Disc& d, const Obstacle& ob)
{
    if (superelliptic_distance(d.center, ob) <= ob.xi_u() || d.contains(ob.center)) {
        return true;
    }
    for (int i = 0; i < kShellSamples; ++i) {
        const double beta = kTwoPi * i / kShellSamples;
        if (superelliptic_distance(d.center + Vec2::polar(d.radius, beta), ob) <= ob.xi_u() ||
            d.contains(contour_point(beta, ob, ob.xi_u()))) {
            return true;
        }
    }
    return false;
}

} // namespace detail

/// Largest obstacle repulsion magnitude the attacker can feel, sampled on
/// polar grids around every obstacle. At least 1 whenever an obstacle exists.
inline double max_obstacle_repulsion(std::span<const Obstacle> obstacles, double sensing_radius)
{
    double best = obstacles.empty() ? 0.0 : 1.0;
    for (const Obstacle& ob : obstacles) {
        const double reach = ob.attacker.delta_u;
        for (int ir = 1; ir <= 40; ++ir) {
            const double r = reach * ir / 40.0;
            for (int i = 0; i < 360; ++i) {
                const Vec2 p = ob.center + Vec2::polar(r, kTwoPi * i / 360.0);
                best = std::max(best, obstacle_repulsion(p, obstacles, sensing_radius).sum.norm());
            }
        }
    }
    return best;
}

/**
 * Checks the standing assumptions of the herding scheme on a scenario.
 * Errors make the scenario unusable; warnings flag parameter choices that
 * weaken the guarantees. Returns an empty list iff every check passes.
 */
inline std::vector<Violation> validate_scenario(const ScenarioConfig& cfg)
{
    std::vector<Violation> out;
    auto error = [&](std::string code, std::string msg) {
        out.push_back({Severity::Error, std::move(code), std::move(msg)});
    };
    auto warn = [&](std::string code, std::string msg) {
        out.push_back({Severity::Warning, std::move(code), std::move(msg)});
    };

    if (!(cfg.integrator.dt > 0.0) || !(cfg.integrator.t_max > 0.0)) {
        error("integrator", "dt and t_max must be positive");
    }
    if (!(cfg.protected_area.radius > 0.0) || !(cfg.safe_area.radius > 0.0)) {
        error("area_radius", "protected and safe area radii must be positive");
    }
    const std::size_t nd = cfg.defenders.count();
    if (cfg.defenders.max_speeds.size() != nd) {
        error("defender_speeds", fmt::format("{} defender positions but {} max speeds", nd,
                                             cfg.defenders.max_speeds.size()));
    }
    if (nd == 1) {
        error("formation_count", "an arc formation needs at least two defenders");
    }
    if (cfg.defenders.radius > cfg.attacker.radius) {
        error("radius_order", fmt::format("defender radius {} exceeds attacker radius {}", cfg.defenders.radius,
                                          cfg.attacker.radius));
    }
    if (cfg.attacker.cruise_speed() > cfg.attacker.max_speed || cfg.attacker.cruise_speed() < 0.0) {
        error("attacker_speed", "attacker speed must lie in [0, v_max_a]");
    }
    if (nd > 0 && !(cfg.attacker.max_speed < cfg.defenders.slowest())) {
        error("speed_order", fmt::format("v_max_a = {} must be below every defender's max speed (slowest {})",
                                         cfg.attacker.max_speed, cfg.defenders.slowest()));
    }
    if (cfg.formation.safe_margin < 2.0 * cfg.defenders.radius) {
        error("assumption5", fmt::format("R_safe = {} is below 2 rho_d = {}", cfg.formation.safe_margin,
                                         2.0 * cfg.defenders.radius));
    }
    if (!(cfg.formation.peer_min > cfg.defenders.radius)) {
        error("peer_min", fmt::format("R_d^(d,m) = {} must exceed rho_d = {}", cfg.formation.peer_min,
                                      cfg.defenders.radius));
    }

    const BlendTriplet ad = cfg.attacker_defender_triplet();
    const double implied_bar = 2.0 * cfg.formation.arc_radius - cfg.formation.attacker_min;
    if (implied_bar >= cfg.formation.attacker_outer) {
        warn("arc_radius_identity",
             fmt::format("R_ad = {} = (R_d^(a,m) + bar R_d^a)/2 needs bar R_d^a = {}, not below R_d^(a,u) = {}",
                         cfg.formation.arc_radius, implied_bar, cfg.formation.attacker_outer));
    } else if (std::abs(implied_bar - ad.delta_bar) > 1e-9) {
        warn("arc_radius_identity", fmt::format("R_ad = {} differs from (R_d^(a,m) + bar R_d^a)/2 = {}",
                                                cfg.formation.arc_radius, 0.5 * (ad.delta_m + ad.delta_bar)));
    }
    if (!ad.valid()) {
        error("attacker_defender_triplet",
              fmt::format("attacker/defender thresholds ({}, {}, {}) are not strictly increasing", ad.delta_m,
                          ad.delta_bar, ad.delta_u));
    } else if (cfg.formation.arc_radius > ad.delta_bar) {
        error("arc_not_saturated", fmt::format("R_ad = {} lies beyond bar R_d^a = {}; the arc cannot saturate the "
                                               "attacker's repulsion",
                                               cfg.formation.arc_radius, ad.delta_bar));
    }
    if (!cfg.peer_triplet().valid()) {
        error("peer_triplet", "defender/defender thresholds are not strictly increasing");
    }

    std::vector<Obstacle> obstacles;
    try {
        obstacles = derive_obstacles(cfg.obstacles, cfg.shell_params());
    } catch (const Error& e) {
        error("obstacle_derivation", e.what());
    }

    for (std::size_t k = 0; k < obstacles.size(); ++k) {
        const Obstacle& ob = obstacles[k];
        if (ob.attacker.delta_m + 1e-12 < std::hypot(ob.w_bar, ob.h_bar)) {
            error("assumption4", fmt::format("obstacle {}: R_a^m = {} below the inflated diagonal {}", k,
                                             ob.attacker.delta_m, std::hypot(ob.w_bar, ob.h_bar)));
        }
        if (detail::disc_touches_shell(cfg.safe_area, ob)) {
            error("safe_area_in_shell", fmt::format("safe area intersects the outer shell of obstacle {}", k));
        }
        if (superelliptic_distance(cfg.attacker.position, ob) <= ob.xi_m()) {
            warn("initial_clearance", fmt::format("attacker starts inside the formation shell of obstacle {}", k));
        }
        for (std::size_t l = k + 1; l < obstacles.size(); ++l) {
            const Obstacle& other = obstacles[l];
            if (detail::outer_shells_touch(ob, other)) {
                error("shell_overlap", fmt::format("outer shells of obstacles {} and {} intersect", k, l));
            }
            const double gap = distance(ob.center, other.center);
            const double need = ob.attacker.delta_u + other.attacker.delta_u;
            if (gap < need) {
                error("lemma1_spacing", fmt::format("obstacles {} and {} are {:.4f} apart, need R_a^u sum {:.4f}",
                                                    k, l, gap, need));
            }
        }
    }

    if (nd >= 2) {
        try {
            const FormationSpec spec = formation_spec(static_cast<int>(nd), cfg.formation.spread,
                                                      cfg.formation.attacker_min, cfg.formation.peer_min,
                                                      cfg.formation.arc_radius);
            const double rep = max_obstacle_repulsion(obstacles, cfg.attacker.sensing_radius);
            if (!(spec.magnitude > rep)) {
                error("heading_infeasible", fmt::format("arc magnitude M = {:.6f} does not exceed the largest "
                                                        "obstacle repulsion {:.6f}",
                                                        spec.magnitude, rep));
            }
            const double chord = 2.0 * cfg.formation.arc_radius * std::sin(cfg.formation.spread / (2.0 * nd - 2.0));
            if (chord < cfg.peer_triplet().delta_u) {
                warn("formation_peer_conflict",
                     fmt::format("adjacent goals are {:.4f} apart, inside the peer repulsion radius {:.4f}", chord,
                                 cfg.peer_triplet().delta_u));
            }
        } catch (const ConfigError& e) {
            error("spread_below_minimum", e.what());
        }
        for (std::size_t j = 0; j < cfg.defenders.max_speeds.size(); ++j) {
            try {
                solve_tracking_params(cfg.controller.exponent, cfg.defenders.max_speeds[j], cfg.attacker.max_speed,
                                      cfg.formation.arc_radius, cfg.heading.psi_prime_rate_max,
                                      cfg.controller.solver_tolerance);
            } catch (const Error& e) {
                error("tracking_gains", fmt::format("defender {}: {}", j, e.what()));
            }
        }
        const double vd = cfg.defenders.slowest();
        const double va = cfg.attacker.max_speed;
        if (vd > va) {
            const double min_transition = (kPi / 2.0) * (vd - va) / cfg.formation.arc_radius;
            if (cfg.heading.transition_time < min_transition) {
                warn("transition_time_bound", fmt::format("Delta T_t = {} below the recommended {:.4f}",
                                                          cfg.heading.transition_time, min_transition));
            }
            const double min_safe =
                va * cfg.heading.transition_time + va * cfg.formation.arc_radius / (vd - va);
            if (cfg.safe_area.radius < min_safe) {
                warn("safe_radius_bound",
                     fmt::format("rho_s = {} below the recommended {:.4f}", cfg.safe_area.radius, min_safe));
            }
        }
    }
    return out;
}

} // namespace herdsim
