#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "herdsim/geom.hpp"
#include "oracles/oracle_values.hpp"

using namespace herdsim;

namespace {

const BlendTriplet kUnit{1.0, 2.0, 3.0};

} // namespace

TEST(Blend, SaturatedBelowBar) { EXPECT_EQ(blend_sigma(1.5, kUnit), 1.0); }

TEST(Blend, BelowMinimumStillSaturated) { EXPECT_EQ(blend_sigma(0.2, kUnit), 1.0); }

TEST(Blend, ZeroBeyondOuter) { EXPECT_EQ(blend_sigma(3.0, kUnit), 0.0); }

TEST(Blend, MidpointIsHalf) { EXPECT_NEAR(blend_sigma(2.5, kUnit), 0.5, 1e-15); }

TEST(Blend, QuarterPointMatchesOracle) { EXPECT_NEAR(blend_sigma(2.25, kUnit), oracle::kSigma_2_25, 1e-15); }

TEST(Blend, InvalidTripletRejected)
{
    EXPECT_THROW(blend_sigma(1.0, {1.0, 1.0, 2.0}), ConfigError);
    EXPECT_THROW(blend_sigma(1.0, {1.0, 3.0, 2.0}), ConfigError);
}

TEST(Blend, MonotoneAndBounded)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double m = u(rng);
        const double bar = m + 0.05 + u(rng);
        const BlendTriplet tt{m, bar, bar + 0.05 + u(rng)};
        double prev = 1.0;
        for (int k = 0; k <= 100; ++k) {
            const double d = tt.delta_m + (tt.delta_u + 0.5 - tt.delta_m) * k / 100.0;
            const double s = blend_sigma(d, tt);
            EXPECT_GE(s, 0.0);
            EXPECT_LE(s, 1.0);
            EXPECT_LE(s, prev + 1e-15);
            prev = s;
        }
    }
}

TEST(Blend, FlatAtBothEnds)
{
    const double h = 1e-6;
    EXPECT_NEAR((blend_sigma(2.0 + h, kUnit) - 1.0) / h, 0.0, 1e-5);
    EXPECT_NEAR((0.0 - blend_sigma(3.0 - h, kUnit)) / h, 0.0, 1e-5);
}

TEST(Angles, WrapExamples)
{
    EXPECT_NEAR(wrap_angle(3.0 * kPi), kPi, 1e-12);
    EXPECT_EQ(wrap_angle(-kPi), kPi);
    EXPECT_EQ(wrap_angle(0.5), 0.5);
}

TEST(Angles, WrapRangeProperty)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng);
        const double w = wrap_angle(a);
        EXPECT_GT(w, -kPi);
        EXPECT_LE(w, kPi);
        EXPECT_NEAR(std::remainder(a - w, kTwoPi), 0.0, 1e-9);
        const double s = wrap_sector(a);
        EXPECT_GE(s, 0.0);
        EXPECT_LT(s, kTwoPi);
        EXPECT_NEAR(std::remainder(a - s, kTwoPi), 0.0, 1e-9);
    }
}

TEST(Angles, UnwrapNearPicksClosestRepresentative)
{
    EXPECT_NEAR(unwrap_near(-3.1, 3.1), kTwoPi - 3.1, 1e-12);
    EXPECT_NEAR(unwrap_near(0.2, 0.1), 0.2, 1e-15);
}

TEST(Vec, UnitOrZero)
{
    EXPECT_EQ(unit_or_zero({0.0, 0.0}), Vec2(0.0, 0.0));
    const Vec2 u = unit_or_zero({3.0, 4.0});
    EXPECT_NEAR(u.x, 0.6, 1e-15);
    EXPECT_NEAR(u.y, 0.8, 1e-15);
    EXPECT_NEAR(cross({1, 0}, {0, 1}), 1.0, 0.0);
    EXPECT_NEAR(dot({1, 2}, {3, 4}), 11.0, 0.0);
}
