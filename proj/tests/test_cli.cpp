#include <gtest/gtest.h>

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = HERCULES_CLI_PATH;
const fs::path kScenarioDir = HERCULES_SCENARIO_DIR;

int exit_code(const std::string& args) {
  const std::string cmd = "\"" + kCli + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch() {
  auto p = fs::temp_directory_path() /
           ("hercules_cli_" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  fs::create_directories(p);
  return p;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST(Cli, ValidateBundledScenario) {
  EXPECT_EQ(exit_code("validate " + quoted(kScenarioDir / "all-unbounded-95.json")), 0);
}

TEST(Cli, OracleBundledScenario) {
  EXPECT_EQ(exit_code("oracle " + quoted(kScenarioDir / "three-connection-example.json")), 0);
}

TEST(Cli, RunWritesOutputs) {
  const auto dir = scratch();
  EXPECT_EQ(exit_code("run " + quoted(kScenarioDir / "dynamic-arrival.json") + " --trials 1 --out " +
                      quoted(dir)),
            0);
  EXPECT_TRUE(fs::exists(dir / "dynamic-arrival_trial0.csv"));
  EXPECT_TRUE(fs::exists(dir / "dynamic-arrival_summary.json"));
  EXPECT_TRUE(fs::exists(dir / "dynamic-arrival_oracle.json"));
  fs::remove_all(dir);
}

TEST(Cli, SweepWritesAggregate) {
  const auto dir = scratch();
  EXPECT_EQ(exit_code("sweep " + quoted(kScenarioDir / "dynamic-arrival.json") +
                      " --param loss --values 0,0.01 --trials 1 --out " + quoted(dir)),
            0);
  EXPECT_TRUE(fs::exists(dir / "dynamic-arrival_sweep_loss.json"));
  fs::remove_all(dir);
}

TEST(Cli, ValidationFailureExitsWithTwo) {
  const auto dir = scratch();
  const auto bad = dir / "bad.json";
  std::ifstream in(kScenarioDir / "three-connection-example.json");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  text.replace(text.find("\"max_bps\": 30000000.0"), 21, "\"max_bps\": 10000000.0");
  std::ofstream(bad) << text;
  EXPECT_EQ(exit_code("validate " + quoted(bad)), 2);
  fs::remove_all(dir);
}

TEST(Cli, ParseFailureExitsWithTwo) {
  const auto dir = scratch();
  const auto bad = dir / "bad.json";
  std::ofstream(bad) << "{ \"name\": ";
  EXPECT_EQ(exit_code("validate " + quoted(bad)), 2);
  fs::remove_all(dir);
}

TEST(Cli, UsageErrorExitsWithTwo) {
  EXPECT_EQ(exit_code(""), 2);
  EXPECT_EQ(exit_code("sweep x --param bogus"), 2);
}

TEST(Cli, RuntimeFailureExitsWithThree) {
  EXPECT_EQ(exit_code("validate " + quoted(kScenarioDir / "missing.json")), 3);
  const auto dir = scratch();
  const auto blocker = dir / "file";
  std::ofstream(blocker) << "x";
  EXPECT_EQ(exit_code("run " + quoted(kScenarioDir / "dynamic-arrival.json") + " --trials 1 --out " +
                      quoted(blocker / "sub")),
            3);
  fs::remove_all(dir);
}
