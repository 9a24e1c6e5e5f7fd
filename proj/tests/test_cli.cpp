// Drives the qgame binary end to end.

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "gtest/gtest.h"

#include <json.hpp>

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(QGAME_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string write_config(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("qgame_cli_test_" + name + ".json");
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(cli, verify_passes) {
  const auto r = run_cli("verify");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  const auto report = nlohmann::json::parse(r.out);
  EXPECT_TRUE(report["passed"].get<bool>());
  EXPECT_EQ(report["seed"].get<std::uint64_t>(), 20260101u);
  EXPECT_EQ(run_cli("verify --seed 99").exit_code, 0);
}

TEST(cli, play) {
  const auto cfg = write_config("play", R"({"entangler": {"type": "cyclic", "alphas": [-0.3333333333333333, 0.6666666666666666, 0.6666666666666666]},
      "strategies": [{"pure": 1}, {"pure": 2}]})");
  const auto r = run_cli("play --config " + cfg);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["alice_payoff"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["bob_payoff"].get<double>(), -1.0, 1e-12);
}

TEST(cli, entropy) {
  const auto cfg = write_config("entropy", R"({"entangler": {"type": "cyclic", "alphas": [-0.3333333333333333, 0.6666666666666666, 0.6666666666666666]},
      "entropy": {"state": "initial"}})");
  const auto r = run_cli("entropy --config " + cfg);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["entropy"].get<double>(), 0.88, 0.005);
}

TEST(cli, dominance_and_solve_alphas) {
  const auto cfg = write_config("dom", R"({"entangler": "jbar3"})");
  const auto r = run_cli("dominance --config " + cfg);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["has_cycle"].get<bool>());
  EXPECT_EQ(j["labels"][0], "R");

  const auto s = run_cli("solve-alphas --seed 5 --config " + write_config("solve", R"({"solve_alphas": {"n": 5}})"));
  ASSERT_EQ(s.exit_code, 0) << s.out;
  const auto sj = nlohmann::json::parse(s.out);
  EXPECT_EQ(sj["alphas"].size(), 5u);
  EXPECT_LT(sj["autocorrelation_residual"].get<double>(), 1e-9);
  EXPECT_EQ(sj["seed"].get<std::uint64_t>(), 5u);
}

TEST(cli, sweep_csv_has_one_row_per_point) {
  const auto cfg = write_config("sweep", R"({"entangler": "jbar3", "strategies": [{"x": 0, "y": 0}, {"x": 0.3, "y": -0.2}],
      "sweep": {"axes": [{"player": "alice", "param": "x", "start": -3, "stop": 3, "count": 11},
                         {"player": "alice", "param": "y", "start": -3, "stop": 3, "count": 11}]}})");
  const auto r = run_cli("sweep --config " + cfg);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "alice_x,alice_y,alice_payoff,bob_payoff");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 121);
  EXPECT_EQ(run_cli("sweep --config " + cfg).out, r.out);
}

TEST(cli, errors_exit_with_validation_code) {
  const auto bad = write_config("bad_alpha", R"({"entangler": {"type": "cyclic", "alphas": [0.5773502691896258, 0.5773502691896258, 0.5773502691896258]}})");
  const auto r = run_cli("play --config " + bad);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.out.find("autocorrelation: residual"), std::string::npos) << r.out;

  EXPECT_EQ(run_cli("play --bogus-flag").exit_code, 1);
  EXPECT_EQ(run_cli("play --config /nonexistent/file.json").exit_code, 1);
  EXPECT_EQ(run_cli("play --format csv").exit_code, 1);
  EXPECT_EQ(run_cli("").exit_code, 1);
}

TEST(cli, out_flag_writes_a_file) {
  const auto path = std::filesystem::temp_directory_path() / "qgame_cli_test_verify_report.json";
  std::filesystem::remove(path);
  const auto r = run_cli("verify --out " + path.string());
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_TRUE(nlohmann::json::parse(in)["passed"].get<bool>());
}
