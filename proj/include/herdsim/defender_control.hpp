#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "herdsim/environment.hpp"
#include "herdsim/errors.hpp"
#include "herdsim/formation_field.hpp"
#include "herdsim/geom.hpp"

namespace herdsim {

/// Gains of the two-regime tracking law. k_d1 and e_t make the commanded
/// speed and its slope continuous at |e| = e_t.
struct TrackingGains {
    double k_d0 = 0.0; // m/s, saturated regime
    double k_d1 = 0.0; // finite-time regime
    double k_d2 = 0.5; // exponent in (0, 1)
    double e_t = 0.0;  // m, switching radius
    double v_max = 0.0;
};

// (1 - tanh^2 e) - k tanh(e) / e; positive near 0, negative for large e.
inline double switching_residual(double e, double k_d2)
{
    const double th = std::tanh(e);
    return (1.0 - th * th) - k_d2 * th / e;
}

inline TrackingGains solve_tracking_params(double k_d2, double v_max_d, double v_max_a, double arc_radius,
                                           double psi_prime_rate_max, double tol = 1e-12)
{
    if (!(k_d2 > 0.0 && k_d2 < 1.0)) {
        throw ConfigError("tracking exponent k_d2 must lie in (0, 1)");
    }
    TrackingGains g;
    g.k_d2 = k_d2;
    g.v_max = v_max_d;
    g.k_d0 = v_max_d - v_max_a - arc_radius * psi_prime_rate_max;
    if (!(g.k_d0 > 0.0)) {
        throw ConfigError("tracking gain k_d0 = v_max_d - v_max_a - R_ad psi'_max is not positive (" +
                          std::to_string(g.k_d0) + ")");
    }
    double lo = 1e-9;
    double hi = 10.0;
    if (!(switching_residual(lo, k_d2) > 0.0 && switching_residual(hi, k_d2) < 0.0)) {
        throw SolverError("switching radius: residual does not change sign on (1e-9, 10]");
    }
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        (switching_residual(mid, k_d2) > 0.0 ? lo : hi) = mid;
    }
    g.e_t = 0.5 * (lo + hi);
    g.k_d1 = g.k_d0 * std::tanh(g.e_t) / std::pow(g.e_t, k_d2);
    return g;
}

/// Commanded correction speed for a tracking error of norm `error`.
inline double tracking_speed(double error, const TrackingGains& g)
{
    if (error > g.e_t) {
        return g.k_d0 * std::tanh(error);
    }
    return g.k_d1 * std::pow(error, g.k_d2);
}

struct DefenderField {
    Vec2 field;
    bool conflict = false;
};

/**
 * Defender j's field: attraction to its goal blended with super-elliptic
 * obstacle repulsion (routed toward the goal) and radial repulsion from peers.
 */
inline DefenderField defender_field(std::size_t j, std::span<const Vec2> positions, Vec2 goal,
                                    std::span<const Obstacle> obstacles, const BlendTriplet& peer_triplet)
{
    const Vec2 p = positions[j];
    DefenderField out;
    double keep = 1.0;
    Vec2 repulsion;
    for (const Obstacle& ob : obstacles) {
        const double sigma = blend_sigma(superelliptic_distance(p, ob), ob.defender);
        if (sigma <= 0.0) {
            continue;
        }
        out.conflict = true;
        keep *= 1.0 - sigma;
        repulsion += Vec2::polar(sigma, repulsive_angle(p, ob, goal));
    }
    for (std::size_t l = 0; l < positions.size(); ++l) {
        if (l == j) {
            continue;
        }
        const Vec2 away = p - positions[l];
        const double dist = away.norm();
        if (dist == 0.0) {
            throw DomainError("defenders " + std::to_string(j) + " and " + std::to_string(l) + " coincide");
        }
        const double sigma = blend_sigma(dist, peer_triplet);
        if (sigma <= 0.0) {
            continue;
        }
        out.conflict = true;
        keep *= 1.0 - sigma;
        repulsion += away * (sigma / dist);
    }
    out.field = attractive_field(p, goal) * keep + repulsion;
    return out;
}

struct DefenderCommand {
    Vec2 velocity;
    bool degenerate = false; // field vanished with a nonzero error; position held
};

/// Tracking law: feed-forward goal velocity plus the field-aligned correction
/// when conflict-free, the correction alone otherwise.
inline DefenderCommand defender_velocity(Vec2 position, Vec2 goal, Vec2 goal_velocity, Vec2 field,
                                         const TrackingGains& g, bool conflict)
{
    DefenderCommand cmd;
    const double error = distance(position, goal);
    Vec2 correction;
    if (error > 0.0) {
        const double fn = field.norm();
        if (!(fn > 1e-12)) {
            cmd.degenerate = true;
            return cmd;
        }
        correction = field * (tracking_speed(error, g) / fn);
    }
    cmd.velocity = conflict ? correction : goal_velocity + correction;
    const double speed = cmd.velocity.norm();
    if (speed > g.v_max) {
        cmd.velocity *= g.v_max / speed;
    }
    return cmd;
}

struct ConvergenceBounds {
    double tracking_time = 0.0; // T_t: error enters the e_t ball
    double attacker_time = 0.0; // T_a^c: attacker's fastest unobstructed arrival
};

/// Settling time of de/dt = -k_d1 |e|^{k_d2 - 1} e from |e| = e0.
inline double power_law_settling_time(double e0, const TrackingGains& g)
{
    return std::pow(e0, 1.0 - g.k_d2) / (g.k_d1 * (1.0 - g.k_d2));
}

/// Uses the quadratic certificate V(e) = |e|^2 / 2 in the tracking bound.
inline ConvergenceBounds convergence_bounds(double e0, const TrackingGains& g, Vec2 r_a0, Vec2 r_p, double v_max_a)
{
    if (!(v_max_a > 0.0)) {
        throw ConfigError("convergence_bounds: attacker speed must be positive");
    }
    ConvergenceBounds b;
    if (e0 > g.e_t) {
        const double v0 = 0.5 * e0 * e0;
        b.tracking_time = (-e0 / std::tanh(e0)) * std::log(g.e_t * g.e_t / (2.0 * v0));
    }
    b.attacker_time = distance(r_a0, r_p) / v_max_a;
    return b;
}

} // namespace herdsim
