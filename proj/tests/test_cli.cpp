#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "deon/cli.hpp"
#include "support/scenarios.hpp"

using namespace deon;
using deon::testing::read_file;
using deon::testing::scenario_path;

namespace {

struct Result {
  int exit;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "deon");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("deon_test_" + std::to_string(::getpid()) + "_" + name);
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

// no effects and three agents: the query needs several decisions
std::string open_scenario() {
  return temp_file("open.deon",
                   "scenario open\nagents a, b, c\npredicates { C1/1, C2/1, action A/1 }\n"
                   "plan steal agent a: reasons { C1(a), C2(a) } action { A(a) }\n");
}

int process_exit(const std::string& args) {
  const std::string cmd = std::string(DEON_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, TheftIsUnethical) {
  auto r = run_cli({"check", scenario_path("theft")});
  EXPECT_EQ(r.exit, cli::exit_code::kUnethical);
  EXPECT_NE(r.out.find("steal: UNETHICAL (generalization)"), std::string::npos) << r.out;
}

TEST(Cli, PedestrianBrakeIsEthical) {
  auto r = run_cli({"check", scenario_path("pedestrian")});
  EXPECT_EQ(r.exit, cli::exit_code::kUnethical);
  EXPECT_NE(r.out.find("brake: ETHICAL"), std::string::npos);
  EXPECT_NE(r.out.find("no_brake: UNETHICAL (autonomy)"), std::string::npos);
}

TEST(Cli, BusIsEthical) { EXPECT_EQ(run_cli({"check", scenario_path("bus")}).exit, cli::exit_code::kEthical); }

TEST(Cli, InvalidInputs) {
  auto empty = run_cli({"check", temp_file("empty.deon", "")});
  EXPECT_EQ(empty.exit, cli::exit_code::kInvalid);
  EXPECT_NE(empty.err.find("expected scenario header"), std::string::npos);
  EXPECT_EQ(run_cli({"check", "/nonexistent/file.deon"}).exit, cli::exit_code::kInvalid);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).exit, cli::exit_code::kUsage);
  EXPECT_EQ(run_cli({"frobnicate", scenario_path("theft")}).exit, cli::exit_code::kUsage);
  EXPECT_EQ(run_cli({"check", "--format", "xml", scenario_path("theft")}).exit, cli::exit_code::kUsage);
  auto sat = run_cli({"sat-debug", scenario_path("theft")});
  EXPECT_EQ(sat.exit, cli::exit_code::kUsage);
  EXPECT_NE(sat.err.find("generalization/steal"), std::string::npos);
}

TEST(Cli, BudgetExhaustionIsIndeterminate) {
  auto r = run_cli({"check", "--budget", "1", open_scenario()});
  EXPECT_EQ(r.exit, cli::exit_code::kIndeterminate) << r.out;
  EXPECT_NE(r.out.find("steal: INDETERMINATE (generalization)"), std::string::npos);
  EXPECT_EQ(run_cli({"check", open_scenario()}).exit, cli::exit_code::kEthical);
  // unethical outranks indeterminate
  EXPECT_EQ(run_cli({"check", "--budget", "1", scenario_path("pedestrian")}).exit, cli::exit_code::kUnethical);
  EXPECT_EQ(run_cli({"check", "--budget", "1", open_scenario(), scenario_path("bus")}).exit, cli::exit_code::kIndeterminate);
}

TEST(Cli, ExitPrecedenceAcrossFiles) {
  const auto bad = temp_file("bad.deon", "scenario");
  EXPECT_EQ(run_cli({"check", scenario_path("bus"), scenario_path("theft")}).exit, cli::exit_code::kUnethical);
  EXPECT_EQ(run_cli({"check", scenario_path("theft"), bad}).exit, cli::exit_code::kInvalid);
  auto r = run_cli({"check", scenario_path("theft"), scenario_path("bus")});
  EXPECT_LT(r.out.find("scenario theft"), r.out.find("scenario bus"));
}

TEST(Cli, ValidateCommand) {
  auto r = run_cli({"validate", scenario_path("merge")});
  EXPECT_EQ(r.exit, 0);
  EXPECT_NE(r.out.find("valid (2 plans)"), std::string::npos);
  auto j = nlohmann::json::parse(run_cli({"validate", "--format", "json", scenario_path("merge")}).out);
  EXPECT_TRUE(j["valid"].get<bool>());
}

TEST(Cli, SatDebugDumpsDimacs) {
  auto r = run_cli({"sat-debug", "--clauses", "generalization/steal", scenario_path("theft")});
  EXPECT_EQ(r.exit, 0);
  EXPECT_NE(r.out.find("p cnf "), std::string::npos);
  EXPECT_NE(r.out.find("c 9 U_steal"), std::string::npos);
}

TEST(Cli, JsonMatchesGoldenSnapshots) {
  for (const std::string name : {"theft", "pedestrian"}) {
    auto r = run_cli({"check", "--format", "json", scenario_path(name)});
    // the snapshot was recorded with a different path, so compare parsed documents
    EXPECT_EQ(nlohmann::json::parse(r.out), nlohmann::json::parse(read_file(std::string(DEON_GOLDEN_DIR) + "/" + name + ".json")))
        << name;
  }
}

TEST(Cli, JsonShape) {
  auto j = nlohmann::json::parse(run_cli({"check", "--format", "json", scenario_path("merge")}).out);
  EXPECT_EQ(j["scenario"], "merge");
  ASSERT_EQ(j["plans"].size(), 2u);
  const auto& m = j["plans"][0];
  EXPECT_EQ(m["plan"], "merge");
  EXPECT_EQ(m["overall"], "unethical");
  EXPECT_EQ(m["principle"], "utility");
  EXPECT_EQ(m["status"], "fail");
  EXPECT_EQ(m["evidence"]["counterpart"], "wait_for_gap");
  EXPECT_EQ(m["verdicts"].size(), 3u);
}

TEST(Cli, HumanAndJsonAgree) {
  for (const auto& name : deon::testing::golden_names()) {
    auto human = run_cli({"check", scenario_path(name)}).out;
    auto j = nlohmann::json::parse(run_cli({"check", "--format", "json", scenario_path(name)}).out);
    for (const auto& p : j["plans"]) {
      std::string overall = p["overall"];
      for (auto& c : overall) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      EXPECT_NE(human.find("  " + p["plan"].get<std::string>() + ": " + overall), std::string::npos) << name;
    }
  }
}

TEST(Cli, Deterministic) {
  for (const auto& name : deon::testing::golden_names()) {
    EXPECT_EQ(run_cli({"explain", "--format", "json", scenario_path(name)}).out,
              run_cli({"explain", "--format", "json", scenario_path(name)}).out);
  }
}

TEST(Cli, ExplainShowsEvidence) {
  auto r = run_cli({"explain", scenario_path("theft")});
  EXPECT_NE(r.out.find("conflict: effect of universalized steal"), std::string::npos);
  EXPECT_EQ(r.out, run_cli({"check", "--explain", scenario_path("theft")}).out);
}

TEST(Binary, ProcessExitCodes) {
  EXPECT_EQ(process_exit("check " + scenario_path("bus")), 0);
  EXPECT_EQ(process_exit("check " + scenario_path("theft")), 1);
  EXPECT_EQ(process_exit("check " + temp_file("empty2.deon", "")), 3);
  EXPECT_EQ(process_exit("--bogus"), 4);
  EXPECT_EQ(process_exit("--version"), 0);
}

TEST(Binary, BudgetFromEnvironment) {
  EXPECT_EQ(process_exit("check " + scenario_path("bus")), 0);
  EXPECT_EQ(std::system(("DEON_BUDGET=1 " + std::string(DEON_CLI_PATH) + " check " + open_scenario() +
                         " >/dev/null 2>&1; test $? -eq 2")
                            .c_str()),
            0);
  EXPECT_EQ(std::system(("DEON_BUDGET=zero " + std::string(DEON_CLI_PATH) + " check " + scenario_path("bus") +
                         " >/dev/null 2>&1; test $? -eq 4")
                            .c_str()),
            0);
}
