#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "herdsim/errors.hpp"

namespace herdsim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Planar vector. Positions in meters, velocities in meters per second.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    static Vec2 polar(double radius, double angle)
    {
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2& operator+=(Vec2 o)
    {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr Vec2& operator-=(Vec2 o)
    {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    constexpr Vec2& operator*=(double s)
    {
        x *= s;
        y *= s;
        return *this;
    }
    constexpr bool operator==(const Vec2&) const = default;

    double norm() const { return std::hypot(x, y); }
    constexpr double squared_norm() const { return x * x + y * y; }
    double angle() const { return std::atan2(y, x); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

// Unit vector along v, or the zero vector when v vanishes.
inline Vec2 unit_or_zero(Vec2 v)
{
    const double n = v.norm();
    return n > 0.0 ? v / n : Vec2{};
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double theta)
{
    double r = std::fmod(theta + kPi, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    r -= kPi;
    return r <= -kPi ? kPi : r;
}

/// Wraps an angle into [0, 2pi).
inline double wrap_sector(double theta)
{
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    return r >= kTwoPi ? 0.0 : r;
}

// Representative of `theta` closest to `reference` (for unwrapping sequences).
inline double unwrap_near(double theta, double reference)
{
    return reference + wrap_angle(theta - reference);
}

/**
 * Thresholds (delta_m, delta_bar, delta_u) of the C1 blending ramp.
 *
 * The ramp is 1 on [delta_m, delta_bar], a cubic on [delta_bar, delta_u]
 * and 0 beyond delta_u. Strict ordering is required; equal thresholds
 * collapse the cubic.
 */
struct BlendTriplet {
    double delta_m = 0.0;
    double delta_bar = 0.0;
    double delta_u = 0.0;

    bool valid() const
    {
        return std::isfinite(delta_m) && std::isfinite(delta_u) && delta_m < delta_bar &&
               delta_bar < delta_u;
    }
};

inline void require_valid(const BlendTriplet& t, const std::string& what)
{
    if (!t.valid()) {
        throw ConfigError(what + ": blending thresholds must satisfy m < bar < u (got " +
                          std::to_string(t.delta_m) + ", " + std::to_string(t.delta_bar) + ", " +
                          std::to_string(t.delta_u) + ")");
    }
}

/// Blending function sigma(delta). Values below delta_m saturate at 1.
inline double blend_sigma(double delta, const BlendTriplet& t)
{
    require_valid(t, "blend_sigma");
    if (delta <= t.delta_bar) {
        return 1.0;
    }
    if (delta >= t.delta_u) {
        return 0.0;
    }
    // Same cubic in the normalized coordinate; the expanded power basis cancels badly.
    const double s = (delta - t.delta_bar) / (t.delta_u - t.delta_bar);
    const double v = 1.0 - s * s * (3.0 - 2.0 * s);
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

} // namespace herdsim
