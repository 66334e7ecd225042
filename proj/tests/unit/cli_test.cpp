// Copyright 2026 The mvsde Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "mvsde_cli/commands.hpp"
#include "mvsde_cli/config.hpp"
#include "mvsde_cli/registry.hpp"

namespace mvsde::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kOu = R"(; mean-field OU
[model]
name = mean_field_ou
alpha = 1

[sim]
dt = 0.01
t_end = 1
n_particles = 200
seed = 42
moment_orders = 2,4
)";

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("mvsde_cli_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

  // Runs the installed tool; returns its exit status.
  int tool(const std::string& args) const {
    const std::string cmd = std::string(MVSDE_TOOL_PATH) + " " + args + " > " + (dir_ / "stdout").string() +
                            " 2> " + (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string out() const { return slurp(dir_ / "stdout"); }
  std::string err() const { return slurp(dir_ / "stderr"); }

  fs::path dir_;
  ModelRegistry registry_;
};

ExperimentConfig parse(const std::string& text, TaskKind task = TaskKind::simulate, const Overrides& o = {}) {
  ModelRegistry registry;
  registry.add(explosive_cubic_entry());
  return parse_config(text, task, registry, o);
}

void expect_config_error(const std::string& text, const std::string& needle, TaskKind task = TaskKind::simulate) {
  try {
    parse(text, task);
    ADD_FAILURE() << "expected a config error mentioning " << needle;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(Config, ParsesAndFillsDefaults) {
  const auto cfg = parse(kOu);
  EXPECT_EQ(cfg.model.name, "mean_field_ou");
  EXPECT_EQ(cfg.sim.n_particles, 200u);
  EXPECT_EQ(cfg.sim.seed, 42u);
  EXPECT_EQ(cfg.sim.moment_orders, (std::vector<double>{2.0, 4.0}));
  EXPECT_EQ(cfg.sim.taming, Taming::none);
  EXPECT_EQ(cfg.init.kind, "gaussian");
}

TEST(Config, AutoTamingFollowsModel) {
  const auto cfg = parse("[model]\nname = cubic\n[sim]\ndt = 0.01\nt_end = 1\nn_particles = 10\n");
  EXPECT_EQ(cfg.sim.taming, Taming::tamed);
}

TEST(Config, MissingRequiredKeyIsNamed) {
  expect_config_error("[model]\nname = mean_field_ou\n[sim]\nt_end = 1\nn_particles = 10\n", "sim.dt");
  expect_config_error("[sim]\ndt = 0.1\nt_end = 1\nn_particles = 10\n", "model.name");
}

TEST(Config, UnknownKeyIsRejected) {
  expect_config_error(std::string(kOu) + "particles = 3\n", "sim.particles");
  expect_config_error(std::string(kOu) + "[extra]\nx = 1\n", "extra.x");
}

TEST(Config, BadValuesAreRejected) {
  expect_config_error("[model]\nname = nope\n[sim]\ndt = 0.1\nt_end = 1\nn_particles = 10\n", "nope");
  expect_config_error("[model]\nname = mean_field_ou\n[sim]\ndt = fast\nt_end = 1\nn_particles = 10\n", "sim.dt");
  expect_config_error("[model]\nname = mean_field_ou\n[sim]\ndt = 0.1\nt_end = 1\nn_particles = -4\n",
                      "sim.n_particles");
  expect_config_error("[model]\nname = mean_field_ou\nalpha = -1\n[sim]\ndt = 0.1\nt_end = 1\nn_particles = 10\n",
                      "model parameters");
}

TEST(Config, TaskTypeMustMatchCommand) {
  expect_config_error(std::string("[task]\ntype = check\n") + kOu, "task.type");
  EXPECT_NO_THROW(parse(std::string("[task]\ntype = simulate\n") + kOu));
}

TEST(Config, DesignOnlyForCheckAndStability) {
  expect_config_error(std::string(kOu) + "[design]\nn_points = 10\n", "design");
  const auto cfg = parse(std::string("[task]\nassumptions = A1\n") + kOu + "[design]\nn_points = 10\n", TaskKind::check);
  EXPECT_EQ(cfg.design.n_points, 10u);
}

TEST(Config, EmptyListsAreRejected) {
  expect_config_error(std::string("[task]\nassumptions =\n") + kOu, "task.assumptions", TaskKind::check);
  expect_config_error(std::string("[task]\nt_grid =\ns_grid = 1\n") + kOu, "task.t_grid", TaskKind::invariant);
  expect_config_error(std::string("[task]\nt_grid = 1,0.5\ns_grid = 1\n") + kOu, "task.t_grid", TaskKind::invariant);
}

TEST(Config, StabilityNeedsKnownBundle) {
  expect_config_error(std::string("[task]\nbundle = nope\n") + kOu, "task.bundle", TaskKind::stability);
  const auto cfg = parse(std::string("[task]\nbundle = abs_pow_r\nr = 2\n") + kOu, TaskKind::stability);
  // Quadratic functional under OU defaults to the claimed exponent -2 alpha.
  EXPECT_DOUBLE_EQ(cfg.stability.gamma_claimed, -2.0);
}

TEST(Config, ResolvedConfigIsAFixedPoint) {
  const std::vector<std::pair<TaskKind, std::string>> cases{
      {TaskKind::simulate, kOu},
      {TaskKind::stability, std::string("[task]\nbundle = abs_pow_r\nr = 2\n") + kOu},
      {TaskKind::contraction, kOu},
      {TaskKind::invariant, std::string("[task]\nt_grid = 0.5,1\ns_grid = 1\n") + kOu},
      {TaskKind::check, std::string("[task]\nassumptions = A1,H\n") + kOu}};
  for (const auto& [task, text] : cases) {
    const std::string once = parse(text, task).to_ini();
    EXPECT_EQ(parse(once, task).to_ini(), once) << to_string(task);
  }
}

TEST(Config, OutputDirectoryPrecedence) {
  const std::string text = std::string(kOu) + "[output]\ndir = from_config\n";
  ::unsetenv("OUTPUT_DIR");
  EXPECT_EQ(parse(kOu).output_dir, "out");
  EXPECT_EQ(parse(text).output_dir, "from_config");
  ::setenv("OUTPUT_DIR", "from_env", 1);
  EXPECT_EQ(parse(text).output_dir, "from_env");
  EXPECT_EQ(parse(text, TaskKind::simulate, Overrides{std::nullopt, std::string("from_flag")}).output_dir, "from_flag");
  ::unsetenv("OUTPUT_DIR");
}

TEST(Config, SeedOverride) { EXPECT_EQ(parse(kOu, TaskKind::simulate, Overrides{7u, std::nullopt}).sim.seed, 7u); }

TEST_F(Scratch, SimulateWritesArtifacts) {
  auto cfg = parse(kOu);
  cfg.output_dir = (dir_ / "run").string();
  std::ostringstream out, err;
  ASSERT_EQ(run_task(cfg, registry_, out, err), kExitOk) << err.str();
  for (const char* f : {"moments.csv", "terminal_cloud.csv", "config.resolved", "run.log"})
    EXPECT_TRUE(fs::exists(dir_ / "run" / f)) << f;
  const std::string moments = slurp(dir_ / "run" / "moments.csv");
  EXPECT_EQ(moments.substr(0, moments.find('\n')), "t,m2,m4,stderr_m2,stderr_m4");
  EXPECT_EQ(moments.find('\r'), std::string::npos);
}

TEST_F(Scratch, StabilityReportLayout) {
  auto cfg = parse(
      "[task]\nbundle = example2_V\nclouds = 8\n[model]\nname = landau_linear\nalpha = 0.25\n"
      "[sim]\ndt = 0.001\nt_end = 1\nn_particles = 2000\nseed = 1\nmoment_orders = 4\n"
      "[init]\nkind = gaussian\nsymmetric = true\n",
      TaskKind::stability);
  cfg.output_dir = dir_.string();
  std::ostringstream out, err;
  ASSERT_EQ(run_task(cfg, registry_, out, err), kExitOk) << err.str();
  const auto j = nlohmann::json::parse(slurp(dir_ / "stability_report.json"));
  for (const char* key : {"gamma_hat", "gamma_claimed", "r", "window", "margins", "witnesses"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_LE(j["gamma_hat"].get<double>(), -1.0);
  EXPECT_DOUBLE_EQ(j["gamma_claimed"].get<double>(), -1.0);
  EXPECT_LE(j["margins"]["sandwich"].get<double>(), 1e-9);
}

TEST_F(Scratch, CheckFlagsExplosiveGrowth) {
  ModelRegistry reg;
  reg.add(explosive_cubic_entry());
  auto cfg = parse_config(
      "[task]\nassumptions = A2\n[model]\nname = explosive_cubic\n[sim]\ndt = 0.01\nt_end = 1\nn_particles = 10\n"
      "[design]\nn_points = 50\n",
      TaskKind::check, reg);
  cfg.output_dir = dir_.string();
  std::ostringstream out, err;
  ASSERT_EQ(run_task(cfg, reg, out, err), kExitOk) << err.str();
  const auto j = nlohmann::json::parse(slurp(dir_ / "margin_A2.json"));
  EXPECT_TRUE(j["violated"].get<bool>());
  EXPECT_TRUE(fs::exists(dir_ / j["witness"]["mu_file"].get<std::string>()));
  EXPECT_NE(out.str().find("A2"), std::string::npos);
}

TEST_F(Scratch, ToolExitCodes) {
  EXPECT_EQ(tool("presets"), 0);
  EXPECT_NE(out().find("mean_field_ou"), std::string::npos);
  EXPECT_NE(out().find("example2_V"), std::string::npos);
  EXPECT_EQ(tool("simulate"), 2);
  EXPECT_EQ(tool("simulate --config " + write("a.ini", kOu).string() + " --bogus"), 2);
  EXPECT_EQ(tool("simulate --config " + (dir_ / "missing.ini").string()), 2);
  EXPECT_EQ(tool("simulate --config " + write("b.ini", "[model]\nname = mean_field_ou\n").string()), 2);
  EXPECT_NE(err().find("sim.dt"), std::string::npos);
}

TEST_F(Scratch, ToolReportsBlowupWithExitThree) {
  const auto ini = write("blow.ini",
                         "[model]\nname = cubic\n[sim]\ndt = 0.01\nt_end = 1\nn_particles = 100\ntaming = none\n"
                         "[init]\nkind = gaussian\nstd = 100\n");
  EXPECT_EQ(tool("simulate --config " + ini.string() + " --output " + (dir_ / "o").string()), 3);
  EXPECT_NE(err().find("non-finite state: particle"), std::string::npos) << err();
}

TEST_F(Scratch, ToolOutputIndependentOfThreadsAndRepeats) {
  const auto ini = write("ou.ini", kOu);
  ASSERT_EQ(tool("simulate --config " + ini.string() + " --threads 1 --output " + (dir_ / "a").string()), 0);
  ASSERT_EQ(tool("simulate --config " + ini.string() + " --threads 4 --output " + (dir_ / "b").string()), 0);
  ASSERT_EQ(tool("simulate --config " + ini.string() + " --threads 4 --output " + (dir_ / "c").string()), 0);
  for (const char* f : {"moments.csv", "terminal_cloud.csv"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    EXPECT_EQ(slurp(dir_ / "b" / f), slurp(dir_ / "c" / f)) << f;
  }
  // Feeding the resolved config back reproduces the run in place.
  const std::string moments = slurp(dir_ / "a" / "moments.csv");
  const std::string resolved = slurp(dir_ / "a" / "config.resolved");
  const auto copy = write("resolved.ini", resolved);
  ASSERT_EQ(tool("simulate --config " + copy.string()), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "moments.csv"), moments);
  EXPECT_EQ(slurp(dir_ / "a" / "config.resolved"), resolved);
}

TEST_F(Scratch, ToolSeedFlagChangesOutput) {
  const auto ini = write("ou.ini", kOu);
  ASSERT_EQ(tool("simulate --config " + ini.string() + " --output " + (dir_ / "a").string()), 0);
  ASSERT_EQ(tool("simulate --config " + ini.string() + " --seed 43 --output " + (dir_ / "b").string()), 0);
  EXPECT_NE(slurp(dir_ / "a" / "moments.csv"), slurp(dir_ / "b" / "moments.csv"));
}

}  // namespace
}  // namespace mvsde::cli
