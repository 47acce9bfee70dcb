#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace ggs::cli;

namespace {

const fs::path kFixtures = GGS_FIXTURE_DIR;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ggs");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string fixture(const char* name) { return (kFixtures / name).string(); }

long iterations_of(const std::string& text) {
  const auto pos = text.find("iterations: ");
  if (pos == std::string::npos) return -1;
  return std::stol(text.substr(pos + 12));
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ggs_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, NoSubcommandIsUsageError) {
  const auto o = run_cli({});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find("solve"), std::string::npos);
}

TEST(Cli, UnknownFlagIsUsageError) {
  EXPECT_EQ(run_cli({"solve", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"solve", "--random", "10", "5", "1", "--consistent", "--method", "nope"}).code, kExitUsage);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run_cli({"--help"}).code, kExitOk); }

TEST(Cli, SolveWorkedFixture) {
  const auto o = run_cli({"solve", fixture("fixture3x2.mtx"), "--rhs", fixture("b.txt"), "--method", "ggs"});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(iterations_of(o.out), 2);
  EXPECT_NE(o.out.find("stop_reason: GRADIENT_REACHED"), std::string::npos);
}

TEST(Cli, SolveWorkedFixtureWithSolution) {
  const auto o = run_cli({"solve", fixture("fixture3x2.mtx"), "--rhs", fixture("b.txt"), "--solution",
                          fixture("x_star.txt")});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(iterations_of(o.out), 2);
  EXPECT_NE(o.out.find("stop_reason: RES_REACHED"), std::string::npos);
}

TEST(Cli, SolveRandomConsistent) {
  const auto o = run_cli({"solve", "--random", "1000", "50", "7", "--consistent", "--method", "ggs"});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_GE(iterations_of(o.out), 100);
  EXPECT_LE(iterations_of(o.out), 160);
}

TEST(Cli, SolveIsByteStable) {
  const std::vector<std::string> args{"solve", "--random", "200", "20", "3", "--inconsistent", "--method", "grcd",
                                      "--seed", "9"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  EXPECT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, IterationCapExitCode) {
  const auto o = run_cli({"solve", "--random", "100", "10", "1", "--consistent", "--max-iters", "3"});
  EXPECT_EQ(o.code, kExitIterationCap);
  EXPECT_EQ(iterations_of(o.out), 3);
}

TEST(Cli, MissingInputFile) {
  EXPECT_EQ(run_cli({"solve", fixture("absent.mtx"), "--consistent"}).code, kExitNoInput);
  EXPECT_EQ(run_cli({"solve", fixture("fixture3x2.mtx"), "--rhs", fixture("absent.txt")}).code, kExitNoInput);
  EXPECT_EQ(run_cli({"bench", fixture("absent_manifest.txt")}).code, kExitNoInput);
  EXPECT_EQ(run_cli({"info", fixture("absent.mtx")}).code, kExitNoInput);
}

TEST(Cli, ConflictingProblemFlags) {
  EXPECT_EQ(run_cli({"solve", "--random", "10", "5", "1", "--consistent", "--inconsistent"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"solve", fixture("fixture3x2.mtx"), "--random", "10", "5", "1", "--consistent"}).code,
            kExitUsage);
}

TEST(Cli, TraceFile) {
  const fs::path dir = scratch("trace");
  const auto o = run_cli({"solve", fixture("fixture3x2.mtx"), "--rhs", fixture("b.txt"), "--solution",
                          fixture("x_star.txt"), "--trace", (dir / "t.csv").string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  std::ifstream in(dir / "t.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "iteration,gradient_norm_sq,res");
  int rows = 0;
  for (std::string l; std::getline(in, l);) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Cli, VerifyBoundsWorkedFixture) {
  const auto o = run_cli({"verify-bounds", fixture("fixture3x2.mtx"), "--rhs", fixture("b.txt")});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("step 0: factor 0.875"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("step 1: factor 0,"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("violations: 0"), std::string::npos);
  EXPECT_NE(o.out.find("result: PASS"), std::string::npos);
}

TEST(Cli, VerifyBoundsRandom) {
  const auto o = run_cli({"verify-bounds", "--random", "200", "20", "5", "--consistent"});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("result: PASS"), std::string::npos);
}

TEST(Cli, VerifyBoundsRankDeficient) {
  const auto o = run_cli({"verify-bounds", fixture("rank_deficient.mtx"), "--consistent"});
  EXPECT_EQ(o.code, kExitError);
  EXPECT_NE(o.err.find("RankDeficient"), std::string::npos) << o.err;
}

TEST(Cli, GenThenSolve) {
  const fs::path dir = scratch("gen");
  const auto g = run_cli({"gen", "--random", "60", "6", "4", "--inconsistent", "--matrix", (dir / "a.mtx").string(),
                          "--rhs", (dir / "b.txt").string(), "--solution", (dir / "x.txt").string()});
  ASSERT_EQ(g.code, kExitOk) << g.err;
  const auto s = run_cli({"solve", (dir / "a.mtx").string(), "--rhs", (dir / "b.txt").string(), "--solution",
                          (dir / "x.txt").string()});
  EXPECT_EQ(s.code, kExitOk) << s.err;
  EXPECT_NE(s.out.find("RES_REACHED"), std::string::npos);
}

TEST(Cli, Info) {
  const auto o = run_cli({"info", fixture("fixture3x2.mtx")});
  EXPECT_EQ(o.code, kExitOk);
  EXPECT_NE(o.out.find("rows: 3\ncols: 2\nnnz: 2\n"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("condition_estimate: 2"), std::string::npos) << o.out;
}

TEST(Cli, Bench) {
  const fs::path dir = scratch("bench");
  const auto o = run_cli({"bench", fixture("manifest.txt"), "--repeats", "3", "--out", dir.string(), "--jobs", "2"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  ASSERT_TRUE(fs::exists(dir / "results.csv"));
  std::ifstream in(dir / "results.csv");
  int rows = 0;
  for (std::string l; std::getline(in, l);) ++rows;
  EXPECT_EQ(rows, 4);
  EXPECT_TRUE(fs::exists(dir / "small-random_GGS_curve.csv"));
  EXPECT_TRUE(fs::exists(dir / "sparse6x4_GRCD_curve.csv"));

  const auto md = run_cli({"bench", fixture("manifest.txt"), "--repeats", "2", "--out", dir.string(), "--format",
                           "markdown", "--methods", "ggs,grcd,rgs"});
  ASSERT_EQ(md.code, kExitOk) << md.err;
  EXPECT_TRUE(fs::exists(dir / "results.md"));
}
