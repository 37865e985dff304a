// End-to-end runs of the command-line tool.
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fno/levelsets.hpp"

using nlohmann::json;

namespace {

struct Result {
  int exit_code = -1;
  std::string out;
};

Result fno_cli(const std::string& args) {
  const std::string cmd = std::string(FNO_CLI) + " " + args + " 2>/dev/null";
  Result res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return res;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) res.out.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string problem(const char* name) { return std::string(FNO_PROBLEM_DIR) + "/" + name; }

std::string temp_path(const std::string& stem) {
  return (std::filesystem::temp_directory_path() /
          (stem + "_" + std::to_string(::getpid()) + ".csv"))
      .string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, DderivKinkRightSide) {
  auto res = fno_cli("dderiv " + problem("kink.json") + " --at 0 --dir 1 --side right");
  ASSERT_EQ(res.exit_code, 0) << res.out;
  auto j = json::parse(res.out);
  EXPECT_EQ(j["schema"], "fno/1");
  EXPECT_EQ(j["command"], "dderiv");
  const json& ls = j["value"]["level_sets"];
  for (std::size_t k = 0; k < ls["r"].size(); ++k) {
    const double r = ls["r"][k];
    EXPECT_NEAR(ls["lower"][0][k].get<double>(), r, 1e-6);
    EXPECT_NEAR(ls["upper"][0][k].get<double>(), 2 - r, 1e-6);
  }
}

TEST(Cli, KktSearchAtZero) {
  auto res = fno_cli("kkt-search " + problem("kkt.json") + " --at 0");
  ASSERT_EQ(res.exit_code, 0) << res.out;
  auto j = json::parse(res.out);
  EXPECT_EQ(j["value"]["lambda"], json::parse("[0.0, 0.0]"));
  EXPECT_EQ(j["seed"], 0);
}

TEST(Cli, InvalidLevelSetsExitTwo) {
  auto res = fno_cli("eval " + problem("invalid_levels.json") + " --at 0");
  EXPECT_EQ(res.exit_code, 2);
  auto j = json::parse(res.out);  // the error document is all there is
  EXPECT_EQ(j["status"], "error");
  EXPECT_EQ(j["error"]["kind"], "InvalidLevelSets");
  EXPECT_FALSE(j.contains("value"));
}

TEST(Cli, EvalCsvRoundTrip) {
  const std::string path = temp_path("fno_eval");
  auto res = fno_cli("eval " + problem("kkt.json") + " --at 0.3 --csv " + path);
  ASSERT_EQ(res.exit_code, 0) << res.out;
  auto j = json::parse(res.out);
  auto grid = fno::LevelGrid::uniform(101);
  auto u = fno::from_csv(slurp(path), grid);
  std::filesystem::remove(path);
  const json& ls = j["value"]["level_sets"];
  for (std::size_t k = 0; k < 101; ++k) {
    EXPECT_EQ(u.lo(0, k), ls["lower"][0][k].get<double>());
    EXPECT_EQ(u.hi(0, k), ls["upper"][0][k].get<double>());
    // Bit-for-bit against the closed form evaluated the same way.
    const double r = (*grid)[k];
    EXPECT_EQ(u.lo(0, k), 0.3 * 0.3 - 1 + r);
  }
}

TEST(Cli, Subdiff1dCsv) {
  const std::string path = temp_path("fno_box");
  auto res = fno_cli("subdiff1d " + problem("kink.json") + " --at 0 --csv " + path);
  ASSERT_EQ(res.exit_code, 0) << res.out;
  const std::string csv = slurp(path);
  std::filesystem::remove(path);
  EXPECT_EQ(csv.rfind("r,cell,vlo_min,vlo_max,vhi_min,vhi_max\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 102);
}

TEST(Cli, ExitCodesFollowStatus) {
  EXPECT_EQ(fno_cli("grad " + problem("kink.json") + " --at 0").exit_code, 1);
  EXPECT_EQ(fno_cli("kkt-search " + problem("kkt.json") + " --at 1").exit_code, 1);
  EXPECT_EQ(fno_cli("composite-check " + problem("composite.json") + " --at 1").exit_code, 1);
  EXPECT_EQ(fno_cli("composite-check " + problem("composite.json") + " --at 0").exit_code, 0);
  EXPECT_EQ(fno_cli("subgrad-verify " + problem("kink.json") + " --at 0 --candidate '[3]'").exit_code, 1);
  EXPECT_EQ(fno_cli("convex-check " + problem("kkt.json")).exit_code, 0);
  EXPECT_EQ(fno_cli("minimize " + problem("quadratic.json") + " --from 1,1").exit_code, 0);
  EXPECT_EQ(fno_cli("dual " + problem("kkt.json") + " --lambda 0,0").exit_code, 0);
  EXPECT_EQ(fno_cli("metric " + problem("kkt.json") + " --at 0 --other 1").exit_code, 0);
  EXPECT_EQ(fno_cli("gdiff " + problem("kkt.json") + " --at 1 --minus-at 0").exit_code, 0);
  EXPECT_EQ(fno_cli("kkt-verify " + problem("kkt.json") + " --at 0 --lambda 0,1").exit_code, 1);
}

TEST(Cli, NegativeNumbersParse) {
  auto res = fno_cli("eval " + problem("kkt.json") + " --at -1");
  ASSERT_EQ(res.exit_code, 0) << res.out;
  EXPECT_EQ(json::parse(res.out)["value"]["level_sets"]["lower"][0][0], 0.0);
}

TEST(Cli, InputErrors) {
  for (const std::string& args : std::vector<std::string>
       {"eval " + problem("kkt.json"), "eval " + problem("kkt.json") + " --at x",
        std::string("eval /nonexistent.json --at 0"), "eval " + problem("kkt.json") + " --at 0,1",
        "eval " + problem("kkt.json") + " --at 9", "dderiv " + problem("kkt.json") + " --at 0 --dir 1 --side up",
        "eval " + problem("kkt.json") + " --at 0 --function g7", std::string("bogus")}) {
    auto res = fno_cli(args);
    EXPECT_EQ(res.exit_code, 2) << args;
    EXPECT_NO_THROW({
      auto j = json::parse(res.out);
      EXPECT_EQ(j["status"], "error") << args;
    }) << args << "\n" << res.out;
  }
}

TEST(Cli, DeterministicGivenSeed) {
  const std::string args = "subgrad-verify " + problem("kink.json") + " --at 0.5 --candidate '[1]' --seed 9";
  auto a = fno_cli(args);
  auto b = fno_cli(args);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out)["seed"], 9);
}

TEST(Cli, TriangularDderivUnderOneSecond) {
  const auto start = std::chrono::steady_clock::now();
  auto res = fno_cli("dderiv " + problem("triangular.json") + " --at 0 --dir 1");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_LT(secs, 1.0);
}
