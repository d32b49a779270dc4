#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/toml_lite.hpp"

using namespace bf;
using namespace bf::cli;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("beamfluid_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string validation_message(const SimConfig& c, Command cmd) {
  try {
    validate(c, cmd);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Toml, ParsesTheSubset) {
  const auto j = parse_toml(R"(
# comment
title = "a \"quoted\" name"   # trailing
count = 12
neg = -3
ratio = 2.5e-3
flag = true
list = [1, 2, 3]
[grid]
nx = 64
[a.b]
inline = { profile = "sine", amplitude = 0.3, mode = 2 }
)");
  EXPECT_EQ(j["title"], "a \"quoted\" name");
  EXPECT_EQ(j["count"], 12);
  EXPECT_TRUE(j["count"].is_number_integer());
  EXPECT_EQ(j["neg"], -3);
  EXPECT_DOUBLE_EQ(j["ratio"].get<double>(), 2.5e-3);
  EXPECT_EQ(j["flag"], true);
  EXPECT_EQ(j["list"], nlohmann::json({1, 2, 3}));
  EXPECT_EQ(j["grid"]["nx"], 64);
  EXPECT_EQ(j["a"]["b"]["inline"]["mode"], 2);
}

TEST(Toml, ErrorsNameTheLine) {
  try {
    parse_toml("a = 1\nb = \n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_toml("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(parse_toml("[t\n"), ConfigError);
  EXPECT_THROW(parse_toml("s = \"open\n"), ConfigError);
}

TEST(Config, RoundTripThroughJson) {
  SimConfig c;
  c.nx = 32;
  c.beam.beta = 0.5;
  c.h0 = {"sine", 0.0, 1.0, 0.3, 0.1, 2, 0};
  c.hdot0 = {"random", 0.0, 0.0, 0.05, 0.0, 1, 99};
  c.levels = {8, 16};
  const SimConfig d = config_from_json(c.to_json());
  EXPECT_EQ(d.to_json(), c.to_json());
}

TEST(Config, UnknownKeysAndTypesRejected) {
  EXPECT_THROW(config_from_json({{"grid", {{"nxx", 3}}}}), ConfigError);
  EXPECT_THROW(config_from_json({{"bogus", 1}}), ConfigError);
  EXPECT_THROW(config_from_json({{"grid", {{"nx", -4}}}}), ConfigError);
  EXPECT_THROW(config_from_json({{"grid", {{"nx", "many"}}}}), ConfigError);
  EXPECT_THROW(config_from_json({{"initial", {{"h0", {{"profile", "square"}}}}}}), ConfigError);
  EXPECT_THROW(config_from_json({{"schema_version", 2}}), ConfigError);
}

TEST(Config, ProfilesSample) {
  const PeriodicGrid1D g(1.0, 16);
  const ProfileSpec s{"cosine", 0.0, 1.0, 0.5, 0.0, 1, 0};
  EXPECT_DOUBLE_EQ(s.sample(g)[0], 1.5);
  const ProfileSpec r{"random", 0.0, 0.0, 0.2, 0.0, 1, 5};
  EXPECT_NEAR(mean(r.sample(g)), 0.0, 1e-15);
  EXPECT_NEAR(r.sample(g).max_abs(), 0.2, 1e-15);
}

TEST(Validate, HypothesesAreNamed) {
  SimConfig c;
  c.beam.gamma = 0.0;
  EXPECT_NE(validation_message(c, Command::SimulateReduced).find("gamma > 0"), std::string::npos);
  c = SimConfig{};
  c.beam.alpha = -1.0;
  EXPECT_NE(validation_message(c, Command::SimulateCoupled).find("alpha > 0"), std::string::npos);
  c = SimConfig{};
  c.h0 = {"sine", 0.0, 0.2, 0.5, 0.0, 1, 0};
  EXPECT_NE(validation_message(c, Command::SimulateReduced).find("min h0 > 0"), std::string::npos);
  c = SimConfig{};
  c.hdot0 = {"constant", 0.1};
  EXPECT_NE(validation_message(c, Command::SimulateReduced).find("zero mean"), std::string::npos);
  c = SimConfig{};
  c.nx = 48;
  EXPECT_NE(validation_message(c, Command::StokesSolve).find("power of two"), std::string::npos);
  c = SimConfig{};
  c.ensemble = 10;
  EXPECT_NE(validation_message(c, Command::LiftCheck).find(">= 30"), std::string::npos);
  c = SimConfig{};
  c.hdot0 = {"sine", 0.0, 0.0, 0.1, 0.0, 1, 0};
  EXPECT_NE(validation_message(c, Command::SimulateCoupled).find("no-slip"), std::string::npos);
  EXPECT_EQ(validation_message(SimConfig{}, Command::SimulateCoupled), "");
}

TEST(Validate, EnsembleDefaults) {
  SimConfig c;
  EXPECT_EQ(ensemble_size(c, Command::VerifyInequalities), 1000u);
  EXPECT_EQ(ensemble_size(c, Command::LiftCheck), 30u);
  c.ensemble = 64;
  EXPECT_EQ(ensemble_size(c, Command::LiftCheck), 64u);
}

TEST(Overrides, FlagsWinOverFile) {
  SimConfig c;
  apply_overrides(c, {std::string("x"), 3, 11, 5, 77});
  EXPECT_EQ(c.out_dir, "x");
  EXPECT_EQ(c.jobs, 3u);
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(c.snapshot_every, 5u);
  EXPECT_EQ(c.ensemble, 77u);
}

TEST(Commands, ReducedRunIsDeterministic) {
  SimConfig c;
  c.nx = 32;
  c.dt = 2.5e-4;
  c.T = 0.0025;
  c.snapshot_every = 5;
  c.h0 = {"sine", 0.0, 1.0, 0.3, 0.0, 1, 0};
  const fs::path a = temp_dir("det_a"), b = temp_dir("det_b");
  c.out_dir = a.string();
  const auto s1 = run_command(Command::SimulateReduced, c);
  c.out_dir = b.string();
  run_command(Command::SimulateReduced, c);
  EXPECT_EQ(slurp(a / "diagnostics.jsonl"), slurp(b / "diagnostics.jsonl"));
  EXPECT_EQ(slurp(a / "snapshots/reduced_00000005.csv"), slurp(b / "snapshots/reduced_00000005.csv"));
  EXPECT_EQ(s1["status"], "ok");
  EXPECT_EQ(s1["outputs"].size(), 5u);  // diagnostics, three snapshots, summary
}

TEST(Commands, ExitCodes) {
  const fs::path d = temp_dir("exit");
  {
    std::ofstream(d / "gamma0.toml") << "[beam]\ngamma = 0.0\n";
    std::ofstream(d / "bad.toml") << "[grid\n";
    std::ofstream(d / "pinch.json") << R"({"grid": {"nx": 16}, "time": {"dt": 0.01, "T": 0.02},
      "initial": {"h0": {"profile": "sine", "mean": 1.0, "amplitude": 0.3}}})";
  }
  auto run_args = [](std::vector<std::string> args) {
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run(static_cast<int>(argv.size()), argv.data());
  };
  const std::string out = (d / "out").string();
  EXPECT_EQ(run_args({"beamfluid", "simulate-reduced", "--config", (d / "gamma0.toml").string(), "--out", out}), 2);
  EXPECT_EQ(run_args({"beamfluid", "simulate-reduced", "--config", (d / "bad.toml").string(), "--out", out}), 2);
  EXPECT_EQ(run_args({"beamfluid", "simulate-reduced", "--bogus"}), 2);
  EXPECT_EQ(run_args({"beamfluid", "simulate-reduced", "--config", (d / "pinch.json").string(), "--out", out}), 0);
  EXPECT_TRUE(fs::exists(fs::path(out) / "summary.json"));
}
