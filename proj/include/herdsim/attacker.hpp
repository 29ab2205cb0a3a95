#pragma once

#include <cmath>
#include <span>

#include "herdsim/environment.hpp"
#include "herdsim/errors.hpp"
#include "herdsim/geom.hpp"

namespace herdsim {

struct AttackerState {
    Vec2 position;
    double heading = 0.0; // direction of the last motion
    double speed = 0.0;
};

struct AttackerParams {
    double sensing_radius = 10.0;
    BlendTriplet defender_triplet{0.3, 0.8, 0.9};
    double deadlock_escape = 0.05;
    double deadlock_tolerance = 1e-6;
};

/// Sum of the blended repulsions of the sensed obstacles, each modeled as a
/// circle around its center, plus the product of (1 - sigma) over them.
struct ObstacleRepulsion {
    Vec2 sum;
    double keep = 1.0;
};

inline ObstacleRepulsion obstacle_repulsion(Vec2 r_a, std::span<const Obstacle> obstacles, double sensing_radius)
{
    ObstacleRepulsion out;
    for (const Obstacle& ob : obstacles) {
        const Vec2 away = r_a - ob.center;
        const double dist = away.norm();
        if (dist > sensing_radius) {
            continue;
        }
        if (dist == 0.0) {
            throw DomainError("attacker coincides with an obstacle center");
        }
        const double sigma = blend_sigma(dist, ob.attacker);
        out.keep *= 1.0 - sigma;
        out.sum += away * (sigma / dist);
    }
    return out;
}

/// Attacker's vector field: attraction to the protected center, blended
/// with unit repulsions from sensed obstacles and defenders. May vanish.
inline Vec2 attacker_field(const AttackerState& state, std::span<const Vec2> defenders,
                           std::span<const Obstacle> obstacles, Vec2 protected_center, const AttackerParams& params)
{
    const Vec2 r_a = state.position;
    ObstacleRepulsion rep = obstacle_repulsion(r_a, obstacles, params.sensing_radius);
    double keep = rep.keep;
    Vec2 repulsion = rep.sum;
    for (const Vec2& r_d : defenders) {
        const Vec2 away = r_a - r_d;
        const double dist = away.norm();
        if (dist > params.sensing_radius) {
            continue;
        }
        if (dist == 0.0) {
            throw DomainError("attacker coincides with a defender");
        }
        const double sigma = blend_sigma(dist, params.defender_triplet);
        keep *= 1.0 - sigma;
        repulsion += away * (sigma / dist);
    }
    return unit_or_zero(protected_center - r_a) * keep + repulsion;
}

struct AttackerMotion {
    Vec2 velocity;
    double heading = 0.0;
    bool deadlock = false;
};

/// Moves along the normalized field at the attacker's speed; when the field
/// vanishes, turns the previous heading by the deadlock escape angle.
inline AttackerMotion attacker_velocity(const AttackerState& state, Vec2 field, const AttackerParams& params)
{
    AttackerMotion m;
    const double norm = field.norm();
    if (norm > params.deadlock_tolerance) {
        m.heading = field.angle();
    } else {
        m.heading = wrap_angle(state.heading + params.deadlock_escape);
        m.deadlock = true;
    }
    m.velocity = Vec2::polar(state.speed, m.heading);
    return m;
}

inline AttackerState attacker_step(const AttackerState& state, Vec2 field, const AttackerParams& params, double dt)
{
    if (!(dt > 0.0)) {
        throw ConfigError("attacker_step: dt must be positive");
    }
    const AttackerMotion m = attacker_velocity(state, field, params);
    return {state.position + m.velocity * dt, m.heading, state.speed};
}

} // namespace herdsim
