#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include <nmls/engine.hpp>
#include <nmls/trace_io.hpp>

#include "nmls/cli.hpp"

namespace fs = std::filesystem;
using namespace nmls;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result nmls_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "nmls");
  std::ostringstream out, err;
  const int code = nmls::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nmls_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, RunRosenbrockConverges) {
  const auto trace = (dir_ / "t.jsonl").string();
  const auto r = nmls_cli({"run", "--problem", "rosenbrock", "--rule", "m1", "--direction", "bfgs", "--trace", trace});
  EXPECT_EQ(r.code, nmls::cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("GradTolReached"), std::string::npos);
  EXPECT_NE(r.out.find("f_evals="), std::string::npos);
  EXPECT_TRUE(fs::exists(trace));
}

TEST_F(Cli, RunTraceRoundTrips) {
  const auto trace = dir_ / "t.jsonl";
  ASSERT_EQ(nmls_cli({"run", "--problem", "wood", "--rule", "nm5(eps,2)", "--trace", trace.string()}).code, 0);
  const auto p = problem_by_id("wood");
  auto rule = make_rule("nm5(eps,2)");
  auto dir = make_direction("bfgs");
  EXPECT_TRUE(load_trace(trace) == solve(p, p.x0, *rule, *dir));
}

TEST_F(Cli, UnknownRuleIsAConfigError) {
  const auto r = nmls_cli({"run", "--problem", "rosenbrock", "--rule", "nm7", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, nmls::cli::kExitConfig);
  EXPECT_NE(r.err.find("nm5(sigma,theta)"), std::string::npos);
  EXPECT_TRUE(fs::is_empty(dir_));
}

TEST_F(Cli, UnknownProblemAndBadFlags) {
  EXPECT_EQ(nmls_cli({"run", "--problem", "nope"}).code, nmls::cli::kExitConfig);
  EXPECT_EQ(nmls_cli({"run", "--problem", "wood", "--beta", "2", "--out-dir", dir_.string()}).code, nmls::cli::kExitConfig);
  EXPECT_EQ(nmls_cli({"run", "--problem", "wood", "--x0", "1,2", "--out-dir", dir_.string()}).code, nmls::cli::kExitConfig);
  EXPECT_EQ(nmls_cli({"frobnicate"}).code, nmls::cli::kExitConfig);
  EXPECT_EQ(nmls_cli({}).code, nmls::cli::kExitConfig);
}

TEST_F(Cli, ZeroBudgetExitsTwo) {
  const auto trace = dir_ / "t.jsonl";
  const auto r = nmls_cli({"run", "--problem", "rosenbrock", "--k-max", "0", "--trace", trace.string()});
  EXPECT_EQ(r.code, nmls::cli::kExitBudget);
  EXPECT_EQ(load_trace(trace).iterations(), 0u);
}

TEST_F(Cli, NumericalAbortExitsThree) {
  // Two trial steps cannot absorb the huge initial gradient of the badly scaled problem.
  const auto r = nmls_cli({"run", "--problem", "brown_badly_scaled", "--direction", "sd", "--l-max", "1", "--out-dir",
                      dir_.string()});
  EXPECT_EQ(r.code, nmls::cli::kExitNumerical) << r.out;
}

TEST_F(Cli, InlineQuadraticAndX0) {
  const auto trace = dir_ / "q.jsonl";
  const auto r = nmls_cli({"run", "--quadratic", "1,4", "--x0", "2,-1", "--direction", "sd", "--trace", trace.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto t = load_trace(trace);
  EXPECT_EQ(t.problem_id, "quadratic[1,4]");
  EXPECT_EQ(t.records.at(0).x[0], 2.0);
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  const auto cfg = dir_ / "run.conf";
  std::ofstream(cfg) << "problem=quadratic[1,4]\nrule=nm3\ndirection=sd\nk-max=1\n";
  const auto trace = dir_ / "c.jsonl";
  auto r = nmls_cli({"run", "--config", cfg.string(), "--trace", trace.string()});
  EXPECT_EQ(r.code, nmls::cli::kExitBudget) << r.err;
  auto t = load_trace(trace);
  EXPECT_EQ(t.rule_id, "nm3");
  EXPECT_EQ(t.config.k_max, 1);
  r = nmls_cli({"run", "--config", cfg.string(), "--k-max", "500", "--trace", trace.string()});
  EXPECT_EQ(r.code, nmls::cli::kExitOk) << r.err;
  EXPECT_EQ(load_trace(trace).config.k_max, 500);
}

TEST_F(Cli, OutDirFromEnvironment) {
  ::setenv("NMLS_OUT_DIR", dir_.string().c_str(), 1);
  const auto r = nmls_cli({"run", "--quadratic", "1", "--direction", "sd"});
  ::unsetenv("NMLS_OUT_DIR");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "quadratic_1___m1__sd.jsonl"));
}

TEST_F(Cli, VerifyFreshTracePasses) {
  const auto trace = dir_ / "q.jsonl";
  ASSERT_EQ(nmls_cli({"run", "--quadratic", "1", "--rule", "m1", "--direction", "sd", "--trace", trace.string()}).code, 0);
  const auto report = dir_ / "report.json";
  const auto r = nmls_cli({"verify", trace.string(), "--L", "1", "--c1", "1", "--c2", "1", "--f-low", "0", "--report",
                      report.string()});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(slurp(report).find("\"passed\": true"), std::string::npos);
  EXPECT_NE(r.out.find("PASS armijo-replay"), std::string::npos);
}

TEST_F(Cli, VerifyCorruptedTraceFails) {
  const auto trace = dir_ / "q.jsonl";
  ASSERT_EQ(nmls_cli({"run", "--quadratic", "1,4", "--rule", "nm2", "--direction", "sd", "--trace", trace.string()}).code, 0);
  auto t = load_trace(trace);
  ASSERT_GT(t.iterations(), 1u);
  t.records[1].trials.back().nu_trial = -1.0;
  t.records[1].nu = -1.0;
  save_trace(trace, t);
  const auto r = nmls_cli({"verify", trace.string(), "--known-constants", "--out-dir", dir_.string()});
  EXPECT_NE(r.code, 0);
  EXPECT_EQ(r.code, nmls::cli::kExitVerdict);
  EXPECT_TRUE(fs::exists(dir_ / "report.json"));
}

TEST_F(Cli, VerifyUnreadableTrace) {
  const auto bad = dir_ / "bad.jsonl";
  std::ofstream(bad) << "garbage\n";
  EXPECT_EQ(nmls_cli({"verify", bad.string(), "--out-dir", dir_.string()}).code, nmls::cli::kExitConfig);
}

TEST_F(Cli, BenchWritesDeterministicCsvs) {
  const auto a = dir_ / "a";
  const auto b = dir_ / "b";
  const std::vector<std::string> common{"bench", "--solvers", "m1,nm1,nm2,nm3,nm4,nm5(eps,2),nm5(eps,1)",
                                        "--no-timestamp", "--problem", "rosenbrock", "--problem", "beale",
                                        "--problem", "quadratic[1,4]", "--tau-grid", "1:0.5:3"};
  auto args_a = common;
  args_a.insert(args_a.end(), {"--out-dir", a.string()});
  auto args_b = common;
  args_b.insert(args_b.end(), {"--out-dir", b.string(), "--jobs", "3"});
  ASSERT_EQ(nmls_cli(args_a).code, 0);
  ASSERT_EQ(nmls_cli(args_b).code, 0);
  for (const auto* f : {"results.csv", "ratios.csv", "profile.csv"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const auto ratios = slurp(a / "ratios.csv");
  EXPECT_EQ(ratios.substr(0, ratios.find('\r')),
            "problem_id,M1,NM1,NM2,NM3,NM4,\"NM5(eps,1)\",\"NM5(eps,2)\"");
  EXPECT_TRUE(fs::exists(a / "traces"));
}

TEST_F(Cli, BenchTimestampOnlyInHeader) {
  ASSERT_EQ(nmls_cli({"bench", "--solvers", "m1", "--problem", "beale", "--out-dir", dir_.string()}).code, 0);
  const auto text = slurp(dir_ / "results.csv");
  EXPECT_EQ(text.rfind("# generated ", 0), 0u);
}

TEST_F(Cli, GriewankWritesTable) {
  const auto r = nmls_cli({"griewank", "--thetas", "0.25,4", "--no-baselines", "--no-timestamp", "--out-dir", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(dir_ / "griewank.csv");
  EXPECT_EQ(csv.rfind("solver_id,min,p25,median,p75,max", 0), 0u);
  EXPECT_NE(csv.find("\"NM5(abs_f0,0.25)\""), std::string::npos);
}

TEST_F(Cli, Listings) {
  auto r = nmls_cli({"list-problems"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rosenbrock 2 (-1.2,1)"), std::string::npos);
  EXPECT_NE(r.out.find("griewank"), std::string::npos);
  r = nmls_cli({"list-rules"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("nm5(sigma,theta)"), std::string::npos);
  EXPECT_NE(r.out.find("bfgs"), std::string::npos);
}
