// Copyright 2026 The Artiprop Authors
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

// Runs the command line tool and checks exit codes and emitted files.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "artiprop/batch.hpp"

namespace {

namespace fs = std::filesystem;

const std::string kCli = ARTIPROP_CLI_PATH;
const std::string kScenarioDir = ARTIPROP_SCENARIO_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("artiprop_cli_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd =
        kCli + " " + args + " >" + (dir_ / "stdout").string() + " 2>" +
        (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

TEST_F(CliTest, ValidateShippedScenario) {
  EXPECT_EQ(run("validate " + kScenarioDir + "/door.scenario"), 0);
  EXPECT_NE(read(dir_ / "stdout").find("ok"), std::string::npos);
}

TEST_F(CliTest, ValidationErrorExitsTwo) {
  const fs::path bad = write("bad.scenario", "controller.K = [-5, 50, 200, 2, 2, 2]\n");
  EXPECT_EQ(run("validate " + bad.string()), 2);
  EXPECT_NE(read(dir_ / "stderr").find("controller.K: must be > 0"),
            std::string::npos);
}

TEST_F(CliTest, ParseErrorExitsTwoWithPosition) {
  const fs::path bad = write("bad.scenario", "name = x\nreplicates 3\n");
  EXPECT_EQ(run("validate " + bad.string()), 2);
  EXPECT_NE(read(dir_ / "stderr").find("line 2, column 12"), std::string::npos);
}

TEST_F(CliTest, MissingFileExitsTwo) {
  EXPECT_EQ(run("validate " + (dir_ / "nope.scenario").string()), 2);
}

TEST_F(CliTest, UnknownOptionExitsTwo) {
  EXPECT_EQ(run("run --frobnicate"), 2);
}

TEST_F(CliTest, RunWritesMetricsAndTrajectories) {
  const fs::path out = dir_ / "out";
  ASSERT_EQ(run("run " + kScenarioDir + "/drawer.scenario --replicates 2 --seed 5 "
                "--traj --out " + out.string()),
            0);
  const std::string metrics = read(out / "metrics.json");
  EXPECT_TRUE(artiprop::validateMetrics(metrics).empty());
  const auto doc = nlohmann::json::parse(metrics);
  EXPECT_EQ(doc["seed_base"], 5);
  ASSERT_EQ(doc["episodes"].size(), 2u);
  for (int i = 0; i < 2; ++i) {
    const std::string csv =
        read(out / ("trajectory_000" + std::to_string(i) + ".csv"));
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    EXPECT_EQ(lines, doc["episodes"][i]["steps"].get<std::size_t>() + 2);
  }
  for (const auto& entry : fs::directory_iterator(out)) {
    EXPECT_NE(entry.path().extension(), ".tmp");
  }
}

TEST_F(CliTest, SweepWritesOnePointPerValue) {
  const fs::path out = dir_ / "sweep";
  ASSERT_EQ(run("sweep " + kScenarioDir + "/door_slip.scenario --replicates 2 "
                "--param grasp.slip_torque_limit --values 0.025 0.25 inf --out " +
                out.string()),
            0);
  const auto doc = nlohmann::json::parse(read(out / "sweep.json"));
  EXPECT_EQ(doc["points"].size(), 3u);
}

TEST_F(CliTest, SweepRejectsBadValues) {
  EXPECT_EQ(run("sweep " + kScenarioDir + "/door.scenario --param runner.dt "
                "--values 1.0 --out " + dir_.string()),
            2);
}

TEST_F(CliTest, UnwritableOutputExitsThree) {
  const fs::path blocker = write("blocker", "");
  EXPECT_EQ(run("run " + kScenarioDir + "/drawer.scenario --replicates 1 --out " +
                (blocker / "sub").string()),
            3);
}

}  // namespace
