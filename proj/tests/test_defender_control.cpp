#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "herdsim/defender_control.hpp"
#include "oracles/oracle_values.hpp"
#include "test_support.hpp"

using namespace herdsim;

namespace {

TrackingGains bundled_gains() { return solve_tracking_params(0.5, 3.5, 0.5, 0.55, 2.0); }

const BlendTriplet kPeer{0.2, 0.3, 0.4};

} // namespace

TEST(Switching, ResidualLimits)
{
    EXPECT_NEAR(switching_residual(1e-9, 0.5), 0.5, 1e-9);
    EXPECT_LT(switching_residual(10.0, 0.5), 0.0);
    EXPECT_GT(switching_residual(10.0, 0.5), -0.1);
}

TEST(Switching, RadiusMatchesBisectionOracle)
{
    const TrackingGains g = bundled_gains();
    EXPECT_NEAR(g.e_t, oracle::kSwitchingRadiusHalf, 1e-10);
    EXPECT_NEAR(g.k_d0, 1.9, 1e-15);
    EXPECT_NEAR(g.k_d1, oracle::kGainK1_kd0_1_9, 1e-10);
}

TEST(Switching, InvalidInputs)
{
    EXPECT_THROW(solve_tracking_params(0.0, 3.5, 0.5, 0.55, 2.0), ConfigError);
    EXPECT_THROW(solve_tracking_params(1.0, 3.5, 0.5, 0.55, 2.0), ConfigError);
    EXPECT_THROW(solve_tracking_params(0.5, 1.5, 0.5, 0.55, 2.0), ConfigError);
}

TEST(TrackingSpeed, ContinuousAndSmoothAtSwitch)
{
    for (double k : {0.2, 0.5, 0.8}) {
        const TrackingGains g = solve_tracking_params(k, 3.5, 0.5, 0.55, 2.0);
        const double above = g.k_d0 * std::tanh(g.e_t);
        const double below = g.k_d1 * std::pow(g.e_t, g.k_d2);
        EXPECT_NEAR(above, below, 1e-12);
        const double slope_above = g.k_d0 * (1.0 - std::tanh(g.e_t) * std::tanh(g.e_t));
        const double slope_below = g.k_d1 * g.k_d2 * std::pow(g.e_t, g.k_d2 - 1.0);
        EXPECT_NEAR(slope_above, slope_below, 1e-9);
    }
}

TEST(DefenderField, NoConflictIsUnitToGoal)
{
    const std::vector<Vec2> pos{{0.0, 0.0}, {10.0, 10.0}};
    const DefenderField f = defender_field(0, pos, {3.0, 4.0}, {}, kPeer);
    EXPECT_FALSE(f.conflict);
    EXPECT_NEAR(f.field.x, 0.6, 1e-15);
    EXPECT_NEAR(f.field.y, 0.8, 1e-15);
}

TEST(DefenderField, SaturatedPeerRepels)
{
    const std::vector<Vec2> pos{{0.0, 0.0}, {0.25, 0.0}};
    const DefenderField f = defender_field(0, pos, {5.0, 5.0}, {}, kPeer);
    EXPECT_TRUE(f.conflict);
    EXPECT_NEAR(f.field.x, -1.0, 1e-15);
    EXPECT_NEAR(f.field.y, 0.0, 1e-15);
}

TEST(DefenderField, HalfBlendedObstacleNormIdentity)
{
    const Obstacle ob = testing_support::make_obstacle(2.0, 2.0);
    const std::vector<Obstacle> obs{ob};
    const double level = 0.5 * (ob.defender.delta_bar + ob.defender.delta_u);
    const Vec2 p = contour_point(0.0, ob, level);
    const double sigma = blend_sigma(superelliptic_distance(p, ob), ob.defender);
    ASSERT_NEAR(sigma, 0.5, 1e-12);
    // Goal on the obstacle's tangent line through p: attraction is orthogonal to the radial repulsion.
    const Vec2 goal = p + Vec2{0.0, 5.0};
    const std::vector<Vec2> pos{p};
    const DefenderField f = defender_field(0, pos, goal, obs, kPeer);
    const double d = wrap_angle(attractive_field(p, goal).angle() - repulsive_angle(p, ob, goal));
    EXPECT_NEAR(f.field.norm(), std::sqrt(1.0 + 2.0 * sigma * (1.0 - sigma) * (std::cos(d) - 1.0)), 1e-12);
}

TEST(DefenderField, CoincidentPeersRejected)
{
    const std::vector<Vec2> pos{{1.0, 1.0}, {1.0, 1.0}};
    EXPECT_THROW(defender_field(0, pos, {0.0, 0.0}, {}, kPeer), DomainError);
}

TEST(DefenderVelocity, ZeroErrorFollowsGoal)
{
    const TrackingGains g = bundled_gains();
    const DefenderCommand c = defender_velocity({1.0, 1.0}, {1.0, 1.0}, {0.3, 0.1}, {0.0, 0.0}, g, false);
    EXPECT_EQ(c.velocity, Vec2(0.3, 0.1));
    EXPECT_FALSE(c.degenerate);
}

TEST(DefenderVelocity, SwitchSpeedAndSaturation)
{
    const TrackingGains g = bundled_gains();
    const Vec2 goal{g.e_t, 0.0};
    const DefenderCommand at = defender_velocity({0.0, 0.0}, goal, {}, {1.0, 0.0}, g, false);
    EXPECT_NEAR(at.velocity.norm(), g.k_d0 * std::tanh(g.e_t), 1e-12);
    const DefenderCommand far = defender_velocity({0.0, 0.0}, {10.0, 0.0}, {5.0, 0.0}, {1.0, 0.0}, g, true);
    EXPECT_NEAR(far.velocity.norm(), g.k_d0, 1e-6);
    const DefenderCommand capped = defender_velocity({0.0, 0.0}, {10.0, 0.0}, {5.0, 0.0}, {1.0, 0.0}, g, false);
    EXPECT_NEAR(capped.velocity.norm(), g.v_max, 1e-12);
}

TEST(DefenderVelocity, DegenerateFieldHolds)
{
    const TrackingGains g = bundled_gains();
    const DefenderCommand c = defender_velocity({0.0, 0.0}, {1.0, 0.0}, {0.2, 0.0}, {0.0, 0.0}, g, true);
    EXPECT_TRUE(c.degenerate);
    EXPECT_EQ(c.velocity, Vec2(0.0, 0.0));
}

TEST(Bounds, AttackerArrival)
{
    const TrackingGains g = bundled_gains();
    EXPECT_NEAR(convergence_bounds(2.0, g, {20.0, 48.0}, {0.0, 0.0}, 1.0).attacker_time, 52.0, 1e-12);
    EXPECT_THROW(convergence_bounds(2.0, g, {20.0, 48.0}, {0.0, 0.0}, 0.0), ConfigError);
}

TEST(Bounds, TrackingTimeExample)
{
    TrackingGains g = bundled_gains();
    g.e_t = 0.5;
    EXPECT_NEAR(convergence_bounds(2.0, g, {}, {1.0, 0.0}, 1.0).tracking_time, oracle::kTrackingTimeExample, 1e-12);
    EXPECT_EQ(convergence_bounds(0.5, g, {}, {1.0, 0.0}, 1.0).tracking_time, 0.0);
}

TEST(Bounds, PowerLawSettlingTime)
{
    const TrackingGains g = bundled_gains();
    EXPECT_NEAR(power_law_settling_time(1.0, g), 2.0 / g.k_d1, 1e-15);
}
