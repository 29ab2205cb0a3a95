#pragma once

// Generated by compute_oracles.py. Do not edit by hand.

namespace oracle {

inline constexpr double kExponentN_2_3 = 1.109810294972681974;
inline constexpr double kExponentXi_2_3 = 2.3131900884546978754;
inline constexpr double kSigma_2_25 = 0.84375;
inline constexpr double kSwitchingRadiusHalf = 1.0886594924826533763;
inline constexpr double kGainK1_kd0_1_9 = 1.4502152596074095338;
inline constexpr double kArcMagnitude3QuarterPi = 2.4142135623730950488;
inline constexpr double kPsiPrimeExample = 1.80731013752585238;
inline constexpr double kTrackingTimeExample = 5.7520941922050161859;
inline constexpr double kDeltaMinBundled = 1.3593476378164877484;
inline constexpr double kArcMagnitudeBundled = 2.243219936541328913;

// Per bundled obstacle: exponent, xi_m, and sweep extrema at resolution 128.
inline constexpr double kBundledExponent[6] = {1.109810294972682, 1.2253235507078026, 1.0698099390304294, 1.1793595229136105, 1.2253235507078026, 1.2253235507078026};
inline constexpr double kBundledXiM[6] = {2.313190088454698, 1.693422838717447, 2.729459891986523, 1.8833344935281753, 1.693422838717447, 1.693422838717447};
inline constexpr double kSweepMin[6] = {-2.2529528830967873, -2.0723204912432056, -1.6487833757408472, -1.7558271314619471, -2.0723204912432056, -1.9352275253920936};
inline constexpr double kSweepMax[6] = {2.039230775655601, 1.9352275253921172, 1.6487833757757615, 1.755827131339698, 1.9352275253921172, 2.072320491202568};
inline constexpr double kSpacingRatioBundled = 0.98389431707669;
inline constexpr double kSpacingRatioDefault = 1.0658855101664144;

} // namespace oracle
