#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "csg/cli.hpp"

using namespace csg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

/// Value following `key ` on its own line.
std::string field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("csg_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST(Cli, CountPrintsTables) {
  const auto r = run({"count", "--agents", "4"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, "stirling 1 7 6 1\nbell 15\ns_dp 25\ns_idp 13\n");
  EXPECT_EQ(field(run({"count", "--agents", "10"}).out, "bell"), "115975");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"count", "--agents", "4", "--bogus"}).code, cli::kUsage);
  EXPECT_EQ(run({"count"}).code, cli::kUsage);
  EXPECT_EQ(run({"gen", "--agents", "5", "--dist", "XX", "--out", "x"}).code, cli::kUsage);
  EXPECT_EQ(run({"solve", "--in", "x", "--algo", "magic"}).code, cli::kUsage);
}

TEST(Cli, MissingFileIsIoError) {
  const auto r = run({"solve", "--in", "/nonexistent/csg/instance.txt"});
  EXPECT_EQ(r.code, cli::kIo);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run({"stats", "--in", "/nonexistent/csg/records.csv"}).code, cli::kIo);
}

TEST(Cli, HelpShowsDefaults) {
  const auto r = run({"solve", "--help"});
  EXPECT_EQ(r.code, cli::kOk);
  for (const char* s : {"--wp", "0.7", "--cutoff-ops", "10000000", "--neigh", "sm", "--relink", "--elite", "10",
                        "--rii-steps", "20"}) {
    EXPECT_NE(r.out.find(s), std::string::npos) << s;
  }
}

TEST_F(CliFiles, GenerateThenSolveExactly) {
  const auto file = path("inst.txt");
  ASSERT_EQ(run({"gen", "--agents", "8", "--dist", "NS", "--seed", "5", "--out", file}).code, cli::kOk);
  std::ifstream in(file);
  const auto inst = read_instance(in);
  EXPECT_EQ(inst, generate_instance(8, Distribution::normal_scaled, 5));

  const auto dp = run({"solve", "--algo", "dp", "--in", file});
  const auto brute = run({"solve", "--algo", "brute", "--in", file});
  const auto idp = run({"solve", "--algo", "idp", "--in", file});
  ASSERT_EQ(dp.code, cli::kOk) << dp.err;
  EXPECT_EQ(field(dp.out, "value"), field(brute.out, "value"));
  EXPECT_EQ(field(dp.out, "value"), field(idp.out, "value"));
  EXPECT_EQ(field(dp.out, "optimal"), "yes");
  EXPECT_EQ(field(brute.out, "structures"), "4140");

  // The printed structure parses back to the printed value.
  const auto cs = CoalitionStructure::parse(field(dp.out, "structure"));
  EXPECT_EQ(format_double(cs_value(cs, inst)), field(dp.out, "value"));

  const auto sh = run({"solve", "--algo", "sandholm", "--in", file});
  EXPECT_EQ(field(sh.out, "value"), field(dp.out, "value"));
  EXPECT_EQ(field(sh.out, "nodes"), "4140");
  const auto partial = run({"solve", "--algo", "sandholm", "--in", file, "--nodes", "128"});
  EXPECT_EQ(field(partial.out, "bound"), "8");
  EXPECT_EQ(field(partial.out, "optimal"), "unknown");
}

TEST_F(CliFiles, HeuristicsAreSeedDeterministic) {
  const auto file = path("inst.txt");
  ASSERT_EQ(run({"gen", "--agents", "10", "--dist", "U", "--out", file}).code, cli::kOk);
  for (const char* algo : {"grasp", "grasp-pr", "rii"}) {
    const std::vector<std::string> args{"solve", "--algo", algo, "--in", file, "--seed", "3", "--max-iter", "5"};
    const auto a = run(args);
    ASSERT_EQ(a.code, cli::kOk) << a.err;
    EXPECT_EQ(a.out, run(args).out);
    EXPECT_FALSE(field(a.out, "ops construction").empty());
    EXPECT_FALSE(field(a.out, "iterations").empty());
  }
  EXPECT_EQ(run({"solve", "--in", file, "--wp", "1.5"}).code, cli::kUsage);
  EXPECT_EQ(run({"solve", "--in", file, "--relink", "sideways"}).code, cli::kUsage);
}

TEST_F(CliFiles, BenchThenStats) {
  const auto prefix = path("b");
  const auto r = run({"bench", "--agents", "7", "--dists", "U,ND", "--instances", "3", "--runs", "2", "--out-prefix",
                      prefix, "--jobs", "2"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  for (const char* d : {"U", "ND"}) {
    for (const char* kind : {"records", "stats", "rld"}) {
      EXPECT_TRUE(fs::exists(prefix + "_" + d + "_" + kind + ".csv")) << d << kind;
    }
  }
  std::ifstream rec(prefix + "_U_records.csv");
  const auto records = read_records_csv(rec);
  EXPECT_EQ(records.size(), 6u);
  const auto s = run({"stats", "--in", prefix + "_U_records.csv"});
  EXPECT_EQ(s.code, cli::kOk);
  EXPECT_EQ(field(s.out, "runs     "), "6");

  std::ofstream(path("junk.csv")) << "not,a,records,file\n";
  EXPECT_EQ(run({"stats", "--in", path("junk.csv")}).code, cli::kIo);
  EXPECT_EQ(run({"bench", "--dists", "U,QQ", "--out-prefix", prefix}).code, cli::kUsage);
}
