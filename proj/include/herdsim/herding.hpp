#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "herdsim/attacker.hpp"
#include "herdsim/environment.hpp"
#include "herdsim/errors.hpp"
#include "herdsim/geom.hpp"

namespace herdsim {

/// Arc formation of N defenders at radius R_ad around the attacker.
struct FormationSpec {
    int count = 0;
    double spread = 0.0;
    double arc_radius = 0.0;
    std::vector<double> offsets; // Delta_j, j = 1..N
    double magnitude = 0.0;      // M = |sum of the N unit repulsions|
    double min_spread = 0.0;
};

/// Smallest spread keeping adjacent defenders R_d^{d,m} apart on a circle of radius R_d^{a,m}.
inline double minimum_spread(int count, double peer_min, double attacker_min)
{
    const double c = 1.0 - peer_min * peer_min / (2.0 * attacker_min * attacker_min);
    if (c < -1.0) {
        throw ConfigError("minimum spread undefined: peer separation exceeds the arc diameter");
    }
    return (count - 1) * std::acos(c);
}

// sin(N d) / sin(d) with d = Delta / (2N - 2).
inline double arc_magnitude(int count, double spread)
{
    const double d = spread / (2.0 * count - 2.0);
    if (std::abs(std::sin(d)) < 1e-15) {
        return static_cast<double>(count);
    }
    return std::sin(count * d) / std::sin(d);
}

inline FormationSpec formation_spec(int count, double spread, double attacker_min, double peer_min, double arc_radius)
{
    if (count < 2) {
        throw ConfigError("formation needs at least two defenders");
    }
    FormationSpec spec;
    spec.count = count;
    spec.spread = spread;
    spec.arc_radius = arc_radius;
    spec.min_spread = minimum_spread(count, peer_min, attacker_min);
    if (spread < spec.min_spread) {
        throw ConfigError("formation spread " + std::to_string(spread) + " rad is below the minimum " +
                          std::to_string(spec.min_spread) + " rad");
    }
    spec.offsets.reserve(static_cast<std::size_t>(count));
    for (int j = 1; j <= count; ++j) {
        spec.offsets.push_back(spread * (2.0 * j - count - 1.0) / (2.0 * count - 2.0));
    }
    spec.magnitude = arc_magnitude(count, spread);
    return spec;
}

/// Polar form of the obstacle repulsion felt by the attacker.
struct Resultant {
    double magnitude = 0.0;
    double angle = 0.0;
};

inline Resultant obstacle_resultant(Vec2 r_a, std::span<const Obstacle> obstacles, double sensing_radius)
{
    const Vec2 sum = obstacle_repulsion(r_a, obstacles, sensing_radius).sum;
    const double mag = sum.norm();
    return {mag, mag > 0.0 ? sum.angle() : 0.0};
}

/**
 * Arc heading psi' such that F_o [C(gamma); S(gamma)] + M [C(psi'); S(psi')]
 * points along psi:
 *   M sin(psi' - psi) = F_o sin(psi - gamma)
 * Principal asin branch, continuous with psi' = psi at F_o = 0.
 */
inline double solve_psi_prime(double psi, double repulsion, double gamma, double magnitude)
{
    if (!(magnitude > repulsion)) {
        throw InfeasibleHeadingError("arc magnitude " + std::to_string(magnitude) +
                                     " does not exceed obstacle repulsion " + std::to_string(repulsion));
    }
    return wrap_angle(psi + std::asin(repulsion / magnitude * std::sin(psi - gamma)));
}

// The heading condition multiplied through by cos(psi), so it stays finite at psi = +-pi/2.
inline double psi_prime_residual(double psi_prime, double psi, double repulsion, double gamma, double magnitude)
{
    return magnitude * std::sin(psi_prime - psi) - repulsion * std::sin(psi - gamma);
}

/// Backward difference of the unwrapped heading history, clamped to +-rate_max.
inline double psi_prime_rate(std::span<const double> history, double dt, double rate_max)
{
    if (history.size() < 2) {
        throw ConfigError("psi_prime_rate needs at least two samples");
    }
    if (!(dt > 0.0)) {
        throw ConfigError("psi_prime_rate: dt must be positive");
    }
    const double last = history[history.size() - 1];
    const double prev = history[history.size() - 2];
    const double rate = wrap_angle(last - prev) / dt;
    return std::clamp(rate, -rate_max, rate_max);
}

/// Closed-form time derivative of psi' from the rates of psi, F_o and gamma
/// (the differentiated heading condition, written without tan(psi)).
inline double psi_prime_rate_analytic(double psi, double psi_rate, double repulsion, double repulsion_rate,
                                      double gamma, double gamma_rate, double psi_prime, double magnitude)
{
    const double num = repulsion_rate * std::sin(psi - gamma) +
                       repulsion * std::cos(psi - gamma) * (psi_rate - gamma_rate);
    return psi_rate + num / (magnitude * std::cos(psi_prime - psi));
}

enum class HeadingPhase { Approach, Transition, Captured };

inline const char* to_string(HeadingPhase p)
{
    switch (p) {
    case HeadingPhase::Approach:
        return "approach";
    case HeadingPhase::Transition:
        return "transition";
    case HeadingPhase::Captured:
        return "captured";
    }
    return "?";
}

struct HeadingState {
    double psi = 0.0;
    double psi_prime = 0.0;
    double psi_prime_rate = 0.0;
    HeadingPhase phase = HeadingPhase::Approach;
    std::optional<double> capture_time; // T_s
};

struct ScheduleParams {
    double transition_time = 9.0; // Delta T_t
    double capture_offset = 0.05; // epsilon_s
};

/**
 * Formation heading. Follows the field direction until the attacker first
 * enters the safe area, then ramps an offset linearly to pi/2 - epsilon_s
 * over the transition time and holds it.
 */
inline double psi_schedule(double field_dir, double t, bool inside_safe, HeadingState& state, const ScheduleParams& p)
{
    if (state.phase == HeadingPhase::Approach && inside_safe) {
        state.phase = HeadingPhase::Transition;
        state.capture_time = t;
    }
    double offset = 0.0;
    if (state.phase != HeadingPhase::Approach) {
        const double full = kPi / 2.0 - p.capture_offset;
        const double elapsed = t - *state.capture_time;
        if (elapsed >= p.transition_time) {
            state.phase = HeadingPhase::Captured;
            offset = full;
        } else {
            offset = full * std::max(elapsed, 0.0) / p.transition_time;
        }
    }
    state.psi = wrap_angle(field_dir + offset);
    return state.psi;
}

struct Goal {
    Vec2 position;
    Vec2 velocity;
};

/// Goal positions on the arc at angles psi' + pi + Delta_j and their velocities.
inline std::vector<Goal> formation_goals(Vec2 r_a, Vec2 v_a, double psi_prime, double psi_prime_rate,
                                         const FormationSpec& spec)
{
    std::vector<Goal> goals;
    goals.reserve(spec.offsets.size());
    for (double offset : spec.offsets) {
        const double alpha = psi_prime + kPi + offset;
        const Vec2 radial = Vec2::polar(1.0, alpha);
        const Vec2 tangential{-radial.y, radial.x};
        goals.push_back({r_a + radial * spec.arc_radius, v_a + tangential * (spec.arc_radius * psi_prime_rate)});
    }
    return goals;
}

} // namespace herdsim
