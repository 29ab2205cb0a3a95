#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "herdsim/environment.hpp"
#include "herdsim/errors.hpp"
#include "herdsim/geom.hpp"

namespace herdsim {

/**
 * Heading of the obstacle-following field at p, given the point the flow is
 * routed to (the safe-area center for the formation, a goal for a defender).
 *
 * With dBeta = wrap_sector(beta_p - beta_s) and dBarS = wrap_sector(barBeta_s - beta_s):
 *   dBeta <  pi : barBeta_p - dBarS + (dBeta / pi)(dBarS - pi)
 *   dBeta >= pi : barBeta_p - dBarS (dBeta - pi) / pi
 * The field points from the obstacle toward the target at dBeta = 0 and is
 * tangent at the watershed dBeta = pi, where it switches circulation.
 */
inline double repulsive_angle(Vec2 p, const Obstacle& ob, Vec2 target)
{
    const Vec2 dp = p - ob.center;
    const Vec2 ds = target - ob.center;
    if ((dp.x == 0.0 && dp.y == 0.0) || (ds.x == 0.0 && ds.y == 0.0)) {
        throw DomainError("repulsive field undefined at the obstacle center");
    }
    const double beta_p = dp.angle();
    const double beta_s = ds.angle();
    const double d_beta = wrap_sector(beta_p - beta_s);
    const double tangent_p = contour_tangent_at(beta_p, ob);
    const double d_tangent_s = wrap_sector(contour_tangent_at(beta_s, ob) - beta_s);
    double phi = 0.0;
    if (d_beta < kPi) {
        phi = tangent_p - d_tangent_s + (d_beta / kPi) * (d_tangent_s - kPi);
    } else {
        phi = tangent_p - d_tangent_s * (d_beta - kPi) / kPi;
    }
    return wrap_angle(phi);
}

/// Radially converging unit field; zero exactly at the target.
inline Vec2 attractive_field(Vec2 p, Vec2 target)
{
    return unit_or_zero(target - p);
}

struct FieldSample {
    Vec2 direction;
    std::optional<std::size_t> active_obstacle;
    double sigma = 0.0;
};

/// Formation field: attraction to the safe center blended with the
/// super-elliptic repulsion of every obstacle whose outer shell contains p.
inline FieldSample combined_field(Vec2 p, std::span<const Obstacle> obstacles, Vec2 safe_center)
{
    FieldSample out;
    double keep = 1.0;
    Vec2 repulsion;
    for (std::size_t k = 0; k < obstacles.size(); ++k) {
        const Obstacle& ob = obstacles[k];
        const double sigma = blend_sigma(superelliptic_distance(p, ob), ob.formation);
        if (sigma <= 0.0) {
            continue;
        }
        keep *= 1.0 - sigma;
        repulsion += Vec2::polar(sigma, repulsive_angle(p, ob, safe_center));
        if (sigma > out.sigma) {
            out.sigma = sigma;
            out.active_obstacle = k;
        }
    }
    out.direction = attractive_field(p, safe_center) * keep + repulsion;
    return out;
}

/**
 * Angle from the attractive field to the repulsive field at a point f on the
 * obstacle's contour E = level_f, when the target sits on the outer contour
 * E = xi_u at sector angle beta_s and f at beta_s + delta_beta. At f == s the
 * limit along the ray toward s is used, which is zero.
 */
inline double partial_beta(const Obstacle& ob, double beta_s, double delta_beta, double level_f)
{
    const Vec2 s = contour_point(beta_s, ob, ob.xi_u());
    const Vec2 f = contour_point(beta_s + delta_beta, ob, level_f);
    const Vec2 to_s = s - f;
    const double attract = to_s.norm() < 1e-12 * (1.0 + s.norm()) ? (s - ob.center).angle() : to_s.angle();
    return wrap_angle(attract - repulsive_angle(f, ob, s));
}

inline double partial_beta(const Obstacle& ob, double beta_s, double delta_beta)
{
    return partial_beta(ob, beta_s, delta_beta, ob.xi_u());
}

struct SweepCell {
    double beta_s = 0.0;
    double delta_beta_lo = 0.0;
    double delta_beta_hi = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct SweepRow {
    double beta_s = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct SweepReport {
    int resolution = 0;
    double margin = 0.0;
    std::vector<SweepCell> cells; // row-major: beta_s outer, delta_beta inner
    std::vector<SweepRow> rows;
    double global_min = 0.0;
    double global_max = 0.0;
    bool passed = false;

    double max_abs() const { return std::max(std::abs(global_min), std::abs(global_max)); }
};

inline constexpr int kMinSweepResolution = 64;

/**
 * Worst-case non-singularity sweep. beta_s takes `resolution` values on
 * [0, pi/2] (endpoints included); delta_beta is split into `resolution`
 * cells over [0, 2pi), each sampled at `samples_per_cell` interior points
 * so the coincident point delta_beta = 0 is never evaluated. Passes iff
 * every |partial_beta| <= pi - margin.
 */
inline SweepReport singularity_sweep(const Obstacle& ob, int resolution, double margin = 0.1,
                                     int samples_per_cell = 4)
{
    if (resolution < kMinSweepResolution) {
        throw ConfigError("sweep resolution must be at least " + std::to_string(kMinSweepResolution));
    }
    if (samples_per_cell < 1) {
        throw ConfigError("sweep needs at least one sample per cell");
    }
    SweepReport rep;
    rep.resolution = resolution;
    rep.margin = margin;
    rep.cells.reserve(static_cast<std::size_t>(resolution) * resolution);
    rep.rows.reserve(static_cast<std::size_t>(resolution));
    rep.global_min = kPi;
    rep.global_max = -kPi;
    const double cell_width = kTwoPi / resolution;
    for (int i = 0; i < resolution; ++i) {
        const double beta_s = (kPi / 2.0) * i / (resolution - 1);
        SweepRow row{beta_s, kPi, -kPi};
        for (int j = 0; j < resolution; ++j) {
            SweepCell cell{beta_s, j * cell_width, (j + 1) * cell_width, kPi, -kPi};
            for (int k = 0; k < samples_per_cell; ++k) {
                const double d_beta = (j + (k + 0.5) / samples_per_cell) * cell_width;
                const double v = partial_beta(ob, beta_s, d_beta);
                cell.min = std::min(cell.min, v);
                cell.max = std::max(cell.max, v);
            }
            row.min = std::min(row.min, cell.min);
            row.max = std::max(row.max, cell.max);
            rep.cells.push_back(cell);
        }
        rep.global_min = std::min(rep.global_min, row.min);
        rep.global_max = std::max(rep.global_max, row.max);
        rep.rows.push_back(row);
    }
    rep.passed = rep.max_abs() <= kPi - margin;
    return rep;
}

} // namespace herdsim
