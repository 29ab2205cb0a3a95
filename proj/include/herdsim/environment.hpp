#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "herdsim/errors.hpp"
#include "herdsim/geom.hpp"

namespace herdsim {

struct Disc {
    Vec2 center;
    double radius = 0.0;

    bool contains(Vec2 p) const { return distance(p, center) <= radius; }
};

/// Axis-aligned rectangle as given in a scenario, before any inflation.
struct ObstacleSpec {
    Vec2 center;
    double width = 0.0;
    double height = 0.0;
    // Per-obstacle overrides of the attacker's circular model.
    std::optional<double> attacker_bar_factor;
    std::optional<double> attacker_outer_factor;
};

/// Inputs of the shell derivation shared by every obstacle of a scenario.
struct ShellParams {
    double formation_radius = 0.65;   // rho_f = R_ad + rho_d
    double formation_clearance = 0.2; // R_safe
    double defender_radius = 0.1;     // rho_d
    double defender_clearance = 0.1;  // R_safe_d
    double bar_fraction = 0.25;       // extra inflation giving the bar threshold
    double outer_fraction = 0.5;      // extra inflation giving the outer threshold
    double attacker_bar_factor = 1.15;
    double attacker_outer_factor = 1.3;
    double solver_tolerance = 1e-10;
    int solver_max_iterations = 500;
};

/**
 * Rectangular obstacle together with its super-elliptic shells.
 *
 * All three shells share the exponent n and the semi-axes (a, b) of the
 * base contour, so their level sets are nested:
 *   formation: (xi_m, xi_bar, xi_u) for the formation center,
 *   defender:  (xi_dj_m, xi_dj_bar, xi_dj_u) for individual defenders,
 *   attacker:  (R_a_m, R_a_bar, R_a_u) Euclidean radii of the attacker's
 *              circular model of the obstacle.
 */
struct Obstacle {
    Vec2 center;
    double w = 0.0;
    double h = 0.0;
    double w_bar = 0.0;
    double h_bar = 0.0;
    double w_bar_d = 0.0;
    double h_bar_d = 0.0;
    double n = 1.0;
    double a = 0.0;
    double b = 0.0;
    BlendTriplet formation;
    BlendTriplet defender;
    BlendTriplet attacker;

    double xi_m() const { return formation.delta_m; }
    double xi_u() const { return formation.delta_u; }
};

struct ExponentSolution {
    double n = 0.0;
    double xi_m = 0.0;
    int iterations = 0;
    bool used_bisection = false;
};

/// Level of the super-elliptic contour through the corner of a w_i x h_i
/// rectangle, for a base rectangle w x h and exponent n.
inline double corner_level(double w, double h, double w_i, double h_i, double n)
{
    return 0.5 * (std::pow(w_i / w, 2.0 * n) + std::pow(h_i / h, 2.0 * n)) - 1.0;
}

// Residual of n = 1 / (1 - exp(-xi(n))).
inline double exponent_residual(double w, double h, double w_bar, double h_bar, double n)
{
    const double xi = corner_level(w, h, w_bar, h_bar, n);
    return n - 1.0 / (1.0 - std::exp(-xi));
}

/**
 * Solves the coupled exponent / threshold system
 *   n = 1 / (1 - exp(-xi)),  xi = ((w_bar/w)^{2n} + (h_bar/h)^{2n}) / 2 - 1
 * by damped fixed-point iteration (lambda = 0.5, seed n = 2), falling back to
 * bisection on the residual over [1 + 1e-6, 50].
 */
inline ExponentSolution solve_n_exponent(double w, double h, double w_bar, double h_bar,
                                         double tol = 1e-10, int max_iterations = 500,
                                         std::string_view label = "obstacle")
{
    if (!(w > 0.0 && h > 0.0 && w_bar > w && h_bar > h && tol > 0.0)) {
        throw ConfigError(std::string(label) +
                          ": exponent solve needs 0 < w < w_bar, 0 < h < h_bar and tol > 0");
    }
    auto target = [&](double n) {
        return 1.0 / (1.0 - std::exp(-corner_level(w, h, w_bar, h_bar, n)));
    };

    constexpr double kDamping = 0.5;
    double n = 2.0;
    for (int it = 1; it <= max_iterations; ++it) {
        const double next = (1.0 - kDamping) * n + kDamping * target(n);
        if (!std::isfinite(next)) {
            break;
        }
        const double step = std::abs(next - n);
        n = next;
        if (step < tol * 1e-2 && std::abs(exponent_residual(w, h, w_bar, h_bar, n)) < tol) {
            return {n, corner_level(w, h, w_bar, h_bar, n), it, false};
        }
    }

    // The residual is strictly increasing in n, so bisection always brackets the root.
    double lo = 1.0 + 1e-6;
    double hi = 50.0;
    if (exponent_residual(w, h, w_bar, h_bar, lo) > 0.0 ||
        exponent_residual(w, h, w_bar, h_bar, hi) < 0.0) {
        throw SolverError(std::string(label) + ": exponent residual does not change sign");
    }
    int it = 0;
    for (; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (exponent_residual(w, h, w_bar, h_bar, mid) > 0.0 ? hi : lo) = mid;
    }
    n = 0.5 * (lo + hi);
    if (!(std::abs(exponent_residual(w, h, w_bar, h_bar, n)) < tol)) {
        throw SolverError(std::string(label) + ": exponent solve did not converge");
    }
    return {n, corner_level(w, h, w_bar, h_bar, n), max_iterations + it, true};
}

/// |dx/a|^{2n} + |dy/b|^{2n} - 1: -1 at the center, 0 on the base contour.
inline double superelliptic_distance(Vec2 p, const Obstacle& ob)
{
    const double two_n = 2.0 * ob.n;
    return std::pow(std::abs((p.x - ob.center.x) / ob.a), two_n) +
           std::pow(std::abs((p.y - ob.center.y) / ob.b), two_n) - 1.0;
}

/**
 * Direction of the counterclockwise tangent of the contour through the point
 * at sector angle `beta` from the obstacle center. The tangent is the
 * gradient of E rotated by +pi/2, so it depends on beta only.
 */
inline double contour_tangent_at(double beta, const Obstacle& ob)
{
    const double c = std::cos(beta);
    const double s = std::sin(beta);
    const double e = 2.0 * ob.n - 1.0;
    // Scale both components by a common positive factor to stay in range.
    const double gx = std::copysign(std::pow(std::abs(c), e), c) / std::pow(ob.a / ob.b, 2.0 * ob.n);
    const double gy = std::copysign(std::pow(std::abs(s), e), s);
    return std::atan2(gx, -gy);
}

inline double contour_tangent_angle(Vec2 p, const Obstacle& ob)
{
    const Vec2 d = p - ob.center;
    if (d.x == 0.0 && d.y == 0.0) {
        throw DomainError("contour tangent undefined at the obstacle center");
    }
    return contour_tangent_at(d.angle(), ob);
}

/// Distance from the center to the contour E = level along sector angle beta.
inline double contour_radius(double beta, const Obstacle& ob, double level)
{
    const double two_n = 2.0 * ob.n;
    const double denom = std::pow(std::abs(std::cos(beta)) / ob.a, two_n) +
                         std::pow(std::abs(std::sin(beta)) / ob.b, two_n);
    return std::pow((1.0 + level) / denom, 1.0 / two_n);
}

inline Vec2 contour_point(double beta, const Obstacle& ob, double level)
{
    return ob.center + Vec2::polar(contour_radius(beta, ob, level), beta);
}

/**
 * Inflates a rectangle into its formation, defender and attacker shells.
 * w_bar = w + 2(rho_f + R_safe); the defender shell inflates by
 * rho_d + R_safe_d with the same exponent. Outer and bar thresholds are the
 * corner levels of rectangles inflated further by outer_fraction and
 * bar_fraction of the base inflation.
 */
inline Obstacle derive_obstacle(const ObstacleSpec& spec, const ShellParams& p, std::size_t index = 0)
{
    const std::string label = "obstacle " + std::to_string(index);
    if (!(spec.width > 0.0 && spec.height > 0.0)) {
        throw ConfigError(label + ": width and height must be positive");
    }
    if (!(p.bar_fraction > 0.0 && p.outer_fraction > p.bar_fraction)) {
        throw ConfigError(label + ": shell fractions must satisfy 0 < bar < outer");
    }
    Obstacle ob;
    ob.center = spec.center;
    ob.w = spec.width;
    ob.h = spec.height;

    const double inflation = p.formation_radius + p.formation_clearance;
    ob.w_bar = ob.w + 2.0 * inflation;
    ob.h_bar = ob.h + 2.0 * inflation;
    const ExponentSolution sol = solve_n_exponent(ob.w, ob.h, ob.w_bar, ob.h_bar, p.solver_tolerance,
                                                  p.solver_max_iterations, label);
    ob.n = sol.n;
    const double root2 = std::pow(2.0, 1.0 / (2.0 * ob.n));
    ob.a = 0.5 * ob.w * root2;
    ob.b = 0.5 * ob.h * root2;

    auto level_for = [&](double extra) {
        return corner_level(ob.w, ob.h, ob.w + 2.0 * extra, ob.h + 2.0 * extra, ob.n);
    };
    ob.formation = {sol.xi_m, level_for(inflation * (1.0 + p.bar_fraction)),
                    level_for(inflation * (1.0 + p.outer_fraction))};

    const double d_inflation = p.defender_radius + p.defender_clearance;
    ob.w_bar_d = ob.w + 2.0 * d_inflation;
    ob.h_bar_d = ob.h + 2.0 * d_inflation;
    ob.defender = {level_for(d_inflation), level_for(d_inflation * (1.0 + p.bar_fraction)),
                   level_for(d_inflation * (1.0 + p.outer_fraction))};

    const double r_min = std::hypot(ob.w_bar, ob.h_bar);
    ob.attacker = {r_min, r_min * spec.attacker_bar_factor.value_or(p.attacker_bar_factor),
                   r_min * spec.attacker_outer_factor.value_or(p.attacker_outer_factor)};
    require_valid(ob.attacker, label + " attacker model");
    return ob;
}

inline std::vector<Obstacle> derive_obstacles(std::span<const ObstacleSpec> specs, const ShellParams& p)
{
    std::vector<Obstacle> out;
    out.reserve(specs.size());
    for (std::size_t k = 0; k < specs.size(); ++k) {
        out.push_back(derive_obstacle(specs[k], p, k));
    }
    return out;
}

} // namespace herdsim
