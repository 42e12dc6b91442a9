#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct CmdResult {
  int exit_code;
  std::string output;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(FPSUMS_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  char buf[4096];
  while (fgets(buf, sizeof(buf), pipe) != nullptr) out += buf;
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = testing::TempDir() + name;
  std::ofstream f(path);
  f << content;
  return path;
}

TEST(ExpsumCommand, CompleteLinearSumIsMinusOne) {
  CmdResult r = run_cli("expsum --p 7 --poly 1,1 --char 0 --format json");
  ASSERT_EQ(r.exit_code, 0);
  const auto out = nlohmann::json::parse(r.output);
  EXPECT_EQ(out.at("schema_version"), 1);
  EXPECT_NEAR(out.at("sum_re").get<double>(), -1.0, 1e-9);
  EXPECT_NEAR(out.at("sum_im").get<double>(), 0.0, 1e-9);
  EXPECT_NEAR(out.at("abs").get<double>(), 1.0, 1e-9);
}

TEST(ExpsumCommand, TrinomialReportListsAllBounds) {
  CmdResult r =
      run_cli("expsum --p 31 --poly \"3,10;5,6;1,15\" --char 0 --format json");
  ASSERT_EQ(r.exit_code, 0);
  const auto out = nlohmann::json::parse(r.output);
  ASSERT_TRUE(out.contains("best"));
  ASSERT_TRUE(out.contains("bounds"));
  const auto& bounds = out.at("bounds");
  for (const char* name : {"trivial", "weil", "ccp1", "cp", "ccp2", "thm16"}) {
    ASSERT_TRUE(bounds.contains(name)) << name;
    EXPECT_GT(bounds.at(name).at("value").get<double>(), 0.0);
  }
  EXPECT_TRUE(bounds.contains(out.at("best").get<std::string>()));
  EXPECT_LE(out.at("abs").get<double>(),
            bounds.at("trivial").at("value").get<double>() + 1e-6);
}

TEST(ExpsumCommand, DecomposedEvaluationAgrees) {
  CmdResult r = run_cli(
      "expsum --p 101 --poly \"2,14;7,35;1,5\" --char 3 --decomposed "
      "--format json");
  ASSERT_EQ(r.exit_code, 0);
  const auto out = nlohmann::json::parse(r.output);
  EXPECT_LT(out.at("decomposed_gap").get<double>(), 1e-6);
}

TEST(ExitCodes, MatchContract) {
  EXPECT_EQ(run_cli("expsum --p 8 --poly 1,1").exit_code, 3);
  EXPECT_EQ(run_cli("expsum --p 7 --poly 1").exit_code, 2);
  EXPECT_EQ(run_cli("expsum --p 7 --poly 0,5").exit_code, 3);
  EXPECT_EQ(run_cli("triples --p 13 --order 5 --lambda 1").exit_code, 3);
  EXPECT_EQ(run_cli("").exit_code, 2);
  EXPECT_EQ(run_cli("--help").exit_code, 0);
  EXPECT_EQ(run_cli("triples --p 13 --order 3").exit_code, 2);
}

TEST(TriplesCommand, EmitsHeaderAndPinnedRow) {
  CmdResult r = run_cli("triples --p 13 --order 3 --lambda 1");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.output.substr(0, r.output.find('\n')),
            "p,d,lambda,T,main_term,deviation,regime,bound,ratio");
  EXPECT_NE(r.output.find("\n13,3,1,90,"), std::string::npos);
}

TEST(EnergyCommand, DeterministicUnderFixedSeed) {
  const std::string args = "energy --p 31 --order 6 --lambda-random 3 --seed 5";
  CmdResult a = run_cli(args);
  CmdResult b = run_cli(args);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.output, b.output);
  EXPECT_EQ(a.output.substr(0, a.output.find('\n')),
            "p,d,lambda,energy,main_term,deviation,regime,bound,ratio");
}

TEST(DtimesCommand, PinnedSmallSet) {
  CmdResult r = run_cli("dtimes --p 7 --set 1,2 --format json");
  ASSERT_EQ(r.exit_code, 0);
  const auto out = nlohmann::json::parse(r.output);
  EXPECT_EQ(out.at("dx").get<std::string>(), "152");
  EXPECT_EQ(out.at("rhs").get<std::string>(), "96");
}

TEST(SumsetCommand, RatioKindReportsProduct) {
  CmdResult r = run_cli(
      "sumset --p 7 --order 1 --lambda 2 --mu 3 --kind ratio_shift "
      "--format json");
  ASSERT_EQ(r.exit_code, 0);
  const auto out = nlohmann::json::parse(r.output);
  EXPECT_EQ(out.at("size").get<int>(), 1);
  EXPECT_FALSE(out.at("covered").get<bool>());
  EXPECT_FALSE(out.at("zero_in_product").get<bool>());
}

TEST(RomanoffCommand, PinnedExample) {
  CmdResult r = run_cli("romanoff --p 11 --base 2 --format json");
  ASSERT_EQ(r.exit_code, 0);
  const auto out = nlohmann::json::parse(r.output);
  EXPECT_EQ(out.at("order").get<int>(), 10);
  EXPECT_EQ(out.at("missing").get<int>(), 0);
}

TEST(SweepCommand, ByteIdenticalAcrossWorkerCounts) {
  const std::string spec = write_temp("sweep_det.json", R"({
    "schema_version": 1,
    "task": "triples",
    "primes": [13, 31],
    "subgroup_orders": "all",
    "max_order": 15,
    "lambda_count": 2,
    "seed": 99
  })");
  CmdResult one = run_cli("sweep --spec " + spec + " --jobs 1");
  CmdResult eight = run_cli("sweep --spec " + spec + " --jobs 8");
  ASSERT_EQ(one.exit_code, 0);
  ASSERT_EQ(eight.exit_code, 0);
  EXPECT_FALSE(one.output.empty());
  EXPECT_EQ(one.output, eight.output);
}

TEST(SweepCommand, CheckPassesAndColumnsFilter) {
  const std::string spec = write_temp("sweep_cols.json", R"({
    "task": "energy",
    "primes": [13],
    "subgroup_orders": [2, 3, 4],
    "lambda_count": 1,
    "seed": 3,
    "columns": ["p", "d", "lambda", "energy"]
  })");
  CmdResult r = run_cli("sweep --spec " + spec + " --check");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.output.substr(0, r.output.find('\n')), "p,d,lambda,energy");
}

TEST(SweepCommand, MalformedSpecsExitTwo) {
  const std::string bad_json = write_temp("bad1.json", "nope");
  EXPECT_EQ(run_cli("sweep --spec " + bad_json).exit_code, 2);
  const std::string bad_task =
      write_temp("bad2.json", R"({"task":"x","primes":[13]})");
  EXPECT_EQ(run_cli("sweep --spec " + bad_task).exit_code, 2);
  const std::string bad_prime =
      write_temp("bad3.json", R"({"task":"triples","primes":[15]})");
  EXPECT_EQ(run_cli("sweep --spec " + bad_prime).exit_code, 2);
  const std::string bad_col = write_temp(
      "bad4.json", R"({"task":"triples","primes":[13],"columns":["zz"]})");
  EXPECT_EQ(run_cli("sweep --spec " + bad_col).exit_code, 2);
  EXPECT_EQ(run_cli("sweep --spec /nonexistent/x.json").exit_code, 2);
}

TEST(SweepCommand, PrimeRangeSelectsOddPrimes) {
  const std::string spec = write_temp("sweep_range.json", R"({
    "task": "triples",
    "prime_range": {"start": 10, "count": 2},
    "subgroup_orders": [1, 2],
    "lambda_count": 1,
    "seed": 1
  })");
  CmdResult r = run_cli("sweep --spec " + spec);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("\n11,"), std::string::npos);
  EXPECT_NE(r.output.find("\n13,"), std::string::npos);
}

}  // namespace
