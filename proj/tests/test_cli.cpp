#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "herdsim/cli.hpp"
#include "test_support.hpp"

using namespace herdsim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("herdsim_test_" + name))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string write_variant(const fs::path& dir, const std::function<void(json&)>& edit)
{
    json doc = json::parse(read_file(testing_support::bundled_scenario_path()));
    edit(doc);
    const fs::path p = dir / "variant.json";
    std::ofstream(p) << doc.dump(2);
    return p.string();
}

std::size_t count_lines(const fs::path& p)
{
    std::ifstream in(p);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++n;
    }
    return n;
}

int tool(const std::string& args)
{
    const std::string cmd = std::string("HERDSIM_LOG=quiet ") + HERDSIM_TOOL + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const Log kQuiet(LogLevel::Quiet);

} // namespace

TEST(Check, BundledIsCleanWithTable)
{
    std::ostringstream out;
    EXPECT_EQ(cmd_check(testing_support::bundled_scenario_path(), out, kQuiet), kExitOk);
    const std::string s = out.str();
    EXPECT_NE(s.find("Delta_min"), std::string::npos);
    EXPECT_NE(s.find("k_d1"), std::string::npos);
    EXPECT_NE(s.find("T_a_c"), std::string::npos);
    EXPECT_EQ(s.find("error"), std::string::npos);
}

TEST(Check, NamesAssumptionFiveViolation)
{
    TempDir dir("check_a5");
    const auto path = write_variant(dir.path, [](json& d) { d["formation"]["safe_margin_m"] = 0.1; });
    std::ostringstream out;
    EXPECT_EQ(cmd_check(path, out, kQuiet), kExitValidation);
    EXPECT_NE(out.str().find("assumption5"), std::string::npos);
}

TEST(Check, PublishedOuterRadiusWarns)
{
    TempDir dir("check_warn");
    const auto path = write_variant(dir.path, [](json& d) { d["formation"]["attacker_outer_m"] = 0.65; });
    std::ostringstream out;
    EXPECT_EQ(cmd_check(path, out, kQuiet), kExitValidation);
    EXPECT_NE(out.str().find("warning [arc_radius_identity]"), std::string::npos);
}

TEST(Check, MissingFileAndSchema)
{
    std::ostringstream out;
    EXPECT_EQ(cmd_check("/nonexistent.json", out, kQuiet), kExitMissingFile);
    TempDir dir("check_schema");
    const auto path = write_variant(dir.path, [](json& d) { d["bogus"] = true; });
    EXPECT_EQ(cmd_check(path, out, kQuiet), kExitSchema);
}

TEST(Simulate, BundledCapturesAndWritesArtifacts)
{
    TempDir dir("sim_bundled");
    SimulateOptions opt;
    opt.scenario = testing_support::bundled_scenario_path();
    opt.out_dir = dir.path.string();
    ASSERT_EQ(cmd_simulate(opt, kQuiet), kExitOk);
    for (const char* f : {"trace.csv", "summary.json", "manifest.json", "trajectory.svg", "ratios.svg"}) {
        EXPECT_TRUE(fs::exists(dir.path / f)) << f;
    }
    const json summary = json::parse(read_file((dir.path / "summary.json").string()));
    EXPECT_TRUE(summary["captured"].get<bool>());
    EXPECT_TRUE(summary["safety_ok"].get<bool>());
    EXPECT_EQ(count_lines(dir.path / "trace.csv"), summary["steps"].get<std::size_t>() + 1);

    const json manifest = json::parse(read_file((dir.path / "manifest.json").string()));
    EXPECT_EQ(manifest["config_hash_sha256"].get<std::string>(),
              sha256_hex(read_file(testing_support::bundled_scenario_path())));
}

TEST(Simulate, NoSvgWhenDisabled)
{
    TempDir dir("sim_nosvg");
    SimulateOptions opt;
    opt.scenario = testing_support::bundled_scenario_path();
    opt.out_dir = dir.path.string();
    opt.t_max = 1.0;
    opt.svg = false;
    cmd_simulate(opt, kQuiet);
    EXPECT_TRUE(fs::exists(dir.path / "trace.csv"));
    EXPECT_FALSE(fs::exists(dir.path / "trajectory.svg"));
}

TEST(Simulate, HalvingDtDoublesRows)
{
    TempDir dir("sim_dt");
    SimulateOptions opt;
    opt.scenario = testing_support::bundled_scenario_path();
    opt.t_max = 20.0;
    opt.svg = false;
    opt.out_dir = (dir.path / "a").string();
    cmd_simulate(opt, kQuiet);
    opt.dt = 0.005;
    opt.out_dir = (dir.path / "b").string();
    cmd_simulate(opt, kQuiet);
    const std::size_t a = count_lines(dir.path / "a" / "trace.csv") - 1;
    const std::size_t b = count_lines(dir.path / "b" / "trace.csv") - 1;
    EXPECT_EQ(a, 2000u);
    EXPECT_EQ(b, 2 * a);
}

TEST(Simulate, SpreadBelowMinimumIsValidationExit)
{
    TempDir dir("sim_spread");
    SimulateOptions opt;
    opt.scenario = write_variant(dir.path, [](json& d) { d["formation"]["spread_rad"] = 1.0; });
    opt.out_dir = (dir.path / "out").string();
    EXPECT_EQ(cmd_simulate(opt, kQuiet), kExitValidation);
    EXPECT_FALSE(fs::exists(dir.path / "out" / "trace.csv"));
}

TEST(Simulate, ShortHorizonIsNotCapture)
{
    TempDir dir("sim_short");
    SimulateOptions opt;
    opt.scenario = testing_support::bundled_scenario_path();
    opt.out_dir = dir.path.string();
    opt.t_max = 10.0;
    opt.svg = false;
    EXPECT_EQ(cmd_simulate(opt, kQuiet), kExitSafety);
}

TEST(Sweep, BundledObstaclePasses)
{
    TempDir dir("sweep");
    SweepOptions opt;
    opt.scenario = testing_support::bundled_scenario_path();
    opt.out_dir = dir.path.string();
    opt.obstacle = 0;
    EXPECT_EQ(cmd_sweep(opt, kQuiet), kExitOk);
    EXPECT_EQ(count_lines(dir.path / "sweep_obstacle0.csv"), 128u * 128u + 1);
    const json s = json::parse(read_file((dir.path / "sweep_obstacle0.json").string()));
    EXPECT_TRUE(s["passed"].get<bool>());
    EXPECT_LT(s["max_abs_partial_beta_rad"].get<double>(), kPi - 0.1);
    EXPECT_TRUE(fs::exists(dir.path / "sweep_obstacle0.svg"));
}

TEST(Sweep, RejectsLowResolutionAndBadIndex)
{
    TempDir dir("sweep_bad");
    SweepOptions opt;
    opt.scenario = testing_support::bundled_scenario_path();
    opt.out_dir = dir.path.string();
    opt.resolution = 16;
    EXPECT_EQ(cmd_sweep(opt, kQuiet), kExitUsage);
    opt.resolution = 64;
    opt.obstacle = 6;
    EXPECT_EQ(cmd_sweep(opt, kQuiet), kExitUsage);
    opt.obstacle = -1;
    EXPECT_EQ(cmd_sweep(opt, kQuiet), kExitUsage);
}

TEST(Binary, ExitCodes)
{
    TempDir dir("binary");
    const std::string scen = testing_support::bundled_scenario_path();
    EXPECT_EQ(tool("check --scenario " + scen), kExitOk);
    EXPECT_EQ(tool("check --scenario /nonexistent.json"), kExitMissingFile);
    EXPECT_EQ(tool("sweep --scenario " + scen + " --resolution 16 --out " + dir.path.string()), kExitUsage);
    EXPECT_EQ(tool("simulate"), kExitUsage);
    EXPECT_EQ(tool("frobnicate"), kExitUsage);
    EXPECT_EQ(tool("--help"), kExitOk);
}

TEST(Manifest, HashIsSha256)
{
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
