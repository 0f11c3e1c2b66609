#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string command = env + " '" SUPERSTAR_CLI "' " + args + " 2>/dev/null";
  Result result;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "superstar_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("simulate --help").code, 0);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("simulate --superstar 5 2 2").code, 2);
  EXPECT_EQ(run("simulate --superstar 5 2 2 --r 2 --bogus").code, 2);
  EXPECT_EQ(run("simulate --superstar 5 2 2 --complete 3 --r 2").code, 2);
  EXPECT_EQ(run("simulate --superstar 5 2 2 --r -1").code, 2);
  EXPECT_EQ(run("simulate --superstar 5 2 2 --r 2 --engine warp").code, 2);
  EXPECT_EQ(run("simulate --complete 4 --r 2 --engine lumped").code, 2);
  EXPECT_EQ(run("simulate --superstar 2 3 3 --r 2 --engine lazy").code, 2);
  EXPECT_EQ(run("restricted --L 0 --M 2 --r 2").code, 2);
  EXPECT_EQ(run("exact --complete 20 --r 2").code, 2);
  EXPECT_EQ(run("grid /nonexistent/grid.csv").code, 2);
}

TEST(Cli, ExactPrintsFractionAndDecimal) {
  const auto r = run("exact --complete 3 --r 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "4/7 ≈ 0.571428571429\n");
  const auto s = run("exact --superstar 5 1 1 --r 2");
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("16/31"), std::string::npos);
  const auto f = run("exact --complete 3 --r 2 --float");
  EXPECT_EQ(f.code, 0);
  EXPECT_NE(f.out.find("0.5714285714"), std::string::npos);
  const auto v = run("exact --star 3 --r 1 --per-vertex");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("\n2 "), std::string::npos);
}

TEST(Cli, RestrictedLimitValues) {
  const auto r = run("restricted --limit-only --r 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("64/67"), std::string::npos);
  EXPECT_NE(r.out.find("67/3"), std::string::npos);
  const auto full = run("restricted --L 20 --M 20 --r 2");
  EXPECT_EQ(full.code, 0);
  for (const char* name : {"q ", "h ", "j ", "p ", "bound ", "gap "}) {
    EXPECT_NE(("\n" + full.out).find(std::string("\n") + name), std::string::npos) << name << full.out;
  }
}

TEST(Cli, SimulateIsReproducible) {
  const std::string args = "simulate --superstar 5 3 3 --r 2 --runs 300 --engine lazy --no-timing";
  const auto a = run(args + " --seed 9");
  const auto b = run(args + " --seed 9");
  const auto c = run(args, "MORAN_SEED=9");
  const auto d = run(args + " --seed 10");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_NE(a.out, d.out);
  EXPECT_EQ(a.out.rfind("k,r,leaves,reservoir,runs,fixations,", 0), 0u);
  EXPECT_NE(a.out.find(",lazy,9,\n"), std::string::npos) << a.out;
  const auto dflt = run(args, "env -u MORAN_SEED");
  EXPECT_NE(dflt.out.find(",lazy,1,\n"), std::string::npos) << dflt.out;
  const auto json = run(args + " --seed 9 --format json");
  EXPECT_EQ(json.out.rfind("{\"k\":5,", 0), 0u) << json.out;
  const auto threads = run(args + " --seed 9 --threads 3");
  EXPECT_EQ(threads.out, a.out);
}

TEST(Cli, GridWritesResultsTableAndPlotData) {
  const auto grid = scratch("grid.csv");
  write_file(grid, "k,leaves,reservoir,r,runs\n# small\n5,2,2,2,200\n3,2,2,10,200\n5,2,2,10,200\n");
  const auto out = scratch("results.csv"), table = scratch("table.txt"), plots = scratch("plots");
  std::filesystem::remove_all(plots);
  const std::string args = "grid '" + grid.string() + "' --seed 3 --no-timing -o '" + out.string() + "' --table '" +
                           table.string() + "' --plot-dir '" + plots.string() + "'";
  ASSERT_EQ(run(args).code, 0);
  const std::string first = read_file(out);
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(read_file(out), first);
  std::istringstream lines(first);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 4);
  EXPECT_NE(read_file(table).find("5 (2, 2)"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(plots / "extinction_k5.csv"));
  EXPECT_TRUE(std::filesystem::exists(plots / "extinction_k3.csv"));
  EXPECT_EQ(read_file(plots / "extinction_k5.csv").rfind("r,extinction_hat,", 0), 0u);

  write_file(grid, "k,leaves,reservoir,r,runs\nk,leaves,reservoir,r,runs\n");
  EXPECT_EQ(run("grid '" + grid.string() + "'").code, 2);
  write_file(grid, "k,leaves,reservoir,r,runs\n5,40,40,2,3\n");
  EXPECT_EQ(run("grid '" + grid.string() + "' --step-budget 10 --no-timing").code, 1);
}

TEST(Cli, GraphRoundTrip) {
  const auto path = scratch("star.txt");
  const auto g = run("graph --superstar 4 2 2 -o '" + path.string() + "'");
  EXPECT_EQ(g.code, 0);
  const auto v = run("graph --graph '" + path.string() + "' --validate");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("strongly_connected yes"), std::string::npos);
  EXPECT_EQ(run("exact --graph '" + path.string() + "' --r 2").out, run("exact --superstar 4 2 2 --r 2").out);
  write_file(path, "n 3\n0 1\n1 0\n");
  const auto bad = run("graph --graph '" + path.string() + "' --validate");
  EXPECT_NE(bad.code, 0);
  EXPECT_NE(bad.out.find("strongly_connected no"), std::string::npos);
}
