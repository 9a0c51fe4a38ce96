// Runs the pathlet executable end to end and inspects exit codes and files.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>
#include <sys/wait.h>

#include "fixtures.hpp"
#include "pathlet/error.hpp"

namespace pathlet {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pathlet_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Exit status of the CLI; stdout and stderr land in files under dir_.
  int run(const std::string& args) {
    const std::string cmd = std::string(PATHLET_CLI_PATH) + " " + args + " >" +
                            (dir_ / "stdout.txt").string() + " 2>" +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const fs::path& p) const {
    std::ifstream in(p.is_absolute() ? p : dir_ / p);
    return std::string((std::istreambuf_iterator<char>(in)), {});
  }

  fs::path write_config(const json& doc, const std::string& name = "config.json") {
    const fs::path p = dir_ / name;
    std::ofstream(p) << doc.dump(2);
    return p;
  }

  json example1_config() const {
    return {{"mode", "train"},
            {"seed", 3},
            {"paths",
             {{"network_file", testing::fixture("example1_network.csv").string()},
              {"trajectory_file",
               testing::fixture("example1_trajectories.txt").string()},
              {"output_dir", (dir_ / "out").string()}}},
            {"env", {{"k", 5}, {"M", 0.25}, {"mu_threshold", 0.5}}}};
  }

  fs::path dir_;
};

TEST_F(CliTest, MissingConfigFileExitsWithMissingInput) {
  EXPECT_EQ(run("--config " + (dir_ / "nope.json").string()),
            int(ErrorCode::kMissingInput));
  EXPECT_NE(read("stderr.txt").find("error[missing_input]"), std::string::npos);
}

TEST_F(CliTest, MissingNetworkFileExitsWithMissingInput) {
  json doc = example1_config();
  doc["paths"]["network_file"] = (dir_ / "absent.csv").string();
  EXPECT_EQ(run("--config " + write_config(doc).string()),
            int(ErrorCode::kMissingInput));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "dictionary.json"));
}

TEST_F(CliTest, BadArgumentsAndConfigValuesFail) {
  EXPECT_EQ(run("--mode train"), int(ErrorCode::kUsage));
  const auto cfg = write_config(example1_config()).string();
  EXPECT_EQ(run("--config " + cfg + " --mode teach"), int(ErrorCode::kUsage));
  json doc = example1_config();
  doc["env"]["k"] = 0;
  EXPECT_EQ(run("--config " + write_config(doc).string()), int(ErrorCode::kConfig));
  std::ofstream(dir_ / "broken.json") << "{";
  EXPECT_EQ(run("--config " + (dir_ / "broken.json").string()),
            int(ErrorCode::kParse));
}

TEST_F(CliTest, ForcedReplayWritesTheGoldenDictionary) {
  const auto cfg = write_config(example1_config()).string();
  ASSERT_EQ(run("--config " + cfg + " --force-actions " +
                testing::fixture("example1_force.txt").string()),
            0)
      << read("stderr.txt");
  const json dict = json::parse(read(dir_ / "out" / "dictionary.json"));
  EXPECT_EQ(dict["pathlets"].size(), 6u);
  EXPECT_EQ(dict["summary"]["S1"], 6);
  EXPECT_DOUBLE_EQ(dict["summary"]["mu_bar"].get<double>(), 17.0 / 24.0);
  EXPECT_NE(read(dir_ / "out" / "trace.csv").find("exhausted"), std::string::npos);
  EXPECT_EQ(read(dir_ / "out" / "report.csv").substr(0, 35),
            "label,value,size,phi,L_traj,mu_bar\n");
  // The resolved config is echoed to the log and written out.
  EXPECT_NE(read("stderr.txt").find("\"mu_threshold\": 0.5"), std::string::npos);
  const json resolved = json::parse(read(dir_ / "out" / "config.resolved.json"));
  EXPECT_EQ(resolved["env"]["k"], 5);
}

TEST_F(CliTest, GenerateTrainEvaluateSweepAndMemory) {
  json doc = {{"mode", "generate"},
              {"seed", 5},
              {"paths",
               {{"network_file", "net.csv"},
                {"trajectory_file", "traj.txt"},
                {"output_dir", "out"}}},
              {"world", {{"grid_width", 3}, {"grid_height", 3}, {"n_trajectories", 40}}},
              {"env", {{"k", 4}}},
              {"train",
               {{"iterations", 2}, {"episodes_per_iteration", 2}, {"batch_size", 8},
                {"hidden_layers", {16, 8}}}},
              {"sweep", {{"parameter", "k"}, {"values", {2, 3}}}}};
  const auto cfg = write_config(doc).string();
  ASSERT_EQ(run("--config " + cfg), 0) << read("stderr.txt");
  EXPECT_TRUE(fs::exists(dir_ / "net.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "traj.txt"));

  ASSERT_EQ(run("--config " + cfg + " --mode memory"), 0) << read("stderr.txt");
  EXPECT_NE(read("stdout.txt").find("bottomup_pathlets 24"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "memory.json"));

  ASSERT_EQ(run("--config " + cfg + " --mode train"), 0) << read("stderr.txt");
  for (const char* f : {"checkpoint.json", "returns.csv", "dictionary.json",
                        "report.csv", "trace.csv", "histogram.json",
                        "train_trajectories.txt", "test_trajectories.txt"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  }
  std::istringstream returns(read(dir_ / "out" / "returns.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(returns, line)) ++rows;
  EXPECT_EQ(rows, 2);

  ASSERT_EQ(run("--config " + cfg + " --mode evaluate"), 0) << read("stderr.txt");
  const std::string curve = read(dir_ / "out" / "curve_dictionary.csv");
  EXPECT_EQ(curve.substr(0, 11), "x,fraction\n");
  EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 11);

  ASSERT_EQ(run("--config " + cfg + " --mode sweep --out " + (dir_ / "sw").string()),
            0)
      << read("stderr.txt");
  const std::string sweep = read(dir_ / "sw" / "sweep.csv");
  EXPECT_EQ(sweep.substr(0, 31), "label,k,size,phi,L_traj,mu_bar\n");
  EXPECT_TRUE(fs::exists(dir_ / "sw" / "sweep_histograms.json"));
}

TEST_F(CliTest, SeedOverrideReachesEveryComponent) {
  const auto cfg = write_config(example1_config()).string();
  ASSERT_EQ(run("--config " + cfg + " --seed 99 --force-actions " +
                testing::fixture("example1_force.txt").string()),
            0);
  const json resolved = json::parse(read(dir_ / "out" / "config.resolved.json"));
  EXPECT_EQ(resolved["seed"], 99);
  const json dict = json::parse(read(dir_ / "out" / "dictionary.json"));
  EXPECT_EQ(dict["summary"]["config"]["rng_seed"], 99);
}

TEST_F(CliTest, EvaluateWithoutDictionaryFails) {
  json doc = example1_config();
  doc["mode"] = "evaluate";
  doc["split_fraction"] = 0.5;
  EXPECT_EQ(run("--config " + write_config(doc).string()),
            int(ErrorCode::kMissingInput));
}

}  // namespace
}  // namespace pathlet
