#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "superstar/experiments.hpp"

using namespace superstar;

namespace {

std::vector<GridCell> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_grid(in);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

ResultRow fake_row(std::uint32_t k, double r, const std::string& r_text, std::uint64_t fixations,
                   std::uint64_t trials) {
  GridCell cell{{k, 200, 200}, true, r, r_text, trials};
  FixationEstimate est;
  est.fixations = fixations;
  est.trials = trials;
  est.p_hat = static_cast<double>(fixations) / static_cast<double>(trials);
  est.ci = agresti_coull(fixations, trials, 0.995);
  est.engine = Engine::Lazy;
  est.master_seed = 42;
  return make_result_row(cell, est, 1.25);
}

}  // namespace

TEST(ParseGrid, ReadsCellsSkippingCommentsAndBlanks) {
  const auto cells = parse("# table\n\nk,leaves,reservoir,r,runs\n5, 200, 200, 2, 2500\n# mid\n3,2,4,1/2,10\n4,1,1,1.5,7\n");
  ASSERT_EQ(cells.size(), 3u);
  EXPECT_EQ(cells[0].spec.k, 5u);
  EXPECT_EQ(cells[0].spec.leaves, 200u);
  EXPECT_EQ(cells[0].spec.reservoir, 200u);
  EXPECT_EQ(cells[0].r, 2.0);
  EXPECT_EQ(cells[0].r_text, "2");
  EXPECT_EQ(cells[0].runs, 2500u);
  EXPECT_EQ(cells[1].r, 0.5);
  EXPECT_EQ(cells[1].r_text, "1/2");
  EXPECT_EQ(cells[2].r, 1.5);
  EXPECT_TRUE(parse("k,leaves,reservoir,r,runs\n").empty());
}

TEST(ParseGrid, RejectsMalformedInput) {
  const std::string h = "k,leaves,reservoir,r,runs\n";
  for (const std::string& text : {std::string(""), std::string("5,2,2,2,10\n"), h + h, h + "5,2,2,2\n",
                                  h + "5,2,2,2,10,1\n", h + "x,2,2,2,10\n", h + "5,2,2,0,10\n", h + "5,2,2,-1,10\n",
                                  h + "5,2,2,abc,10\n", h + "5,2,2,2,0\n", h + "1,2,2,2,10\n", h + "5,0,2,2,10\n",
                                  h + "5,2,2,2,1.5\n"}) {
    EXPECT_THROW(parse(text), GridParseError) << text;
  }
  try {
    parse(h + "5,2,2,2,10\n\n5,2,2,2,x\n");
    FAIL();
  } catch (const GridParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(RunGrid, DeterministicAndInGridOrder) {
  ExperimentGrid grid;
  grid.cells = parse("k,leaves,reservoir,r,runs\n5,3,3,2,300\n3,4,2,5,300\n2,3,3,1.5,300\n4,2,5,0.8,300\n");
  grid.master_seed = 77;
  const auto serial = run_grid(grid);
  grid.threads = 3;
  const auto parallel = run_grid(grid);
  ASSERT_EQ(serial.size(), 4u);
  ASSERT_EQ(parallel.size(), 4u);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_FALSE(serial[i].failed);
    EXPECT_EQ(serial[i].cell.spec.k, grid.cells[i].spec.k);
    EXPECT_EQ(serial[i].fixations, parallel[i].fixations);
    EXPECT_EQ(serial[i].seed, cell_seed(77, i));
    EXPECT_EQ(serial[i].trials, 300u);
    EXPECT_NEAR(serial[i].reference, std::pow(grid.cells[i].r, -static_cast<double>(grid.cells[i].spec.k)), 1e-15);
    EXPECT_DOUBLE_EQ(serial[i].extinction_hat, 1.0 - serial[i].p_hat);
  }
  EXPECT_EQ(serial[0].engine, Engine::Lazy);
  EXPECT_EQ(serial[2].engine, Engine::Lumped);
  std::ostringstream a, b;
  write_results_csv(a, serial, false);
  write_results_csv(b, parallel, false);
  EXPECT_EQ(a.str(), b.str());
}

TEST(RunGrid, FailingCellDoesNotStopOthers) {
  ExperimentGrid grid;
  grid.cells = parse("k,leaves,reservoir,r,runs\n5,3,3,2,50\n5,50,50,2,5\n3,2,2,2,50\n");
  grid.step_budget = 100;
  const auto rows = run_grid(grid);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(rows[1].failed);
  EXPECT_NE(rows[1].error.find("budget"), std::string::npos) << rows[1].error;
  EXPECT_FALSE(rows[2].failed);
  std::ostringstream out;
  write_results_csv(out, rows, false);
  const auto fields = fields_of(lines_of(out.str())[2]);
  ASSERT_EQ(fields.size(), 14u);
  for (std::size_t i = 5; i <= 9; ++i) EXPECT_TRUE(fields[i].empty()) << i;
  EXPECT_EQ(fields[0], "5");
  EXPECT_EQ(fields[13], "");
}

TEST(ResultsCsv, HeaderAndFields) {
  const std::vector<ResultRow> rows{fake_row(5, 2.0, "2", 2345, 2500)};
  std::ostringstream out;
  write_results_csv(out, rows);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "k,r,leaves,reservoir,runs,fixations,p_hat,ci_lo,ci_hi,extinction_hat,ref_r_pow_minus_k,engine,seed,wall_s");
  EXPECT_EQ(lines[1], "5,2,200,200,2500,2345,0.938000,0.922967,0.950280,0.062000,0.03125,lazy,42,1.250");
}

TEST(ResultsCsv, NonSuperstarRowsLeaveShapeEmpty) {
  ResultRow row = fake_row(5, 2.0, "2", 4, 7);
  row.cell.superstar = false;
  std::ostringstream out;
  write_results_csv(out, {row}, false);
  const auto fields = fields_of(lines_of(out.str())[1]);
  ASSERT_EQ(fields.size(), 14u);
  EXPECT_EQ(fields[0], "");
  EXPECT_EQ(fields[1], "2");
  EXPECT_EQ(fields[2], "");
  EXPECT_EQ(fields[3], "");
  EXPECT_EQ(fields[4], "7");
  EXPECT_EQ(fields[6], "0.571429");
  EXPECT_EQ(fields[10], "");
  EXPECT_EQ(fields[13], "");
}

TEST(ResultsJson, OneObjectPerRow) {
  const std::vector<ResultRow> rows{fake_row(5, 2.0, "2", 2345, 2500), fake_row(3, 10.0, "10", 9930, 10000)};
  std::ostringstream out;
  write_results_json_lines(out, rows, false);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 2u);
  const auto j = nlohmann::json::parse(lines[1]);
  EXPECT_EQ(j["k"], 3);
  EXPECT_EQ(j["fixations"], 9930);
  EXPECT_EQ(j["engine"], "lazy");
  EXPECT_DOUBLE_EQ(j["ref_r_pow_minus_k"].get<double>(), 0.001);
  EXPECT_FALSE(j.contains("wall_s"));
  EXPECT_EQ(lines[0].substr(0, 6), "{\"k\":5");
}

TEST(Table, RowsByShapeColumnsByR) {
  const std::vector<ResultRow> rows{fake_row(5, 10.0, "10", 9900, 10000), fake_row(3, 2.0, "2", 2179, 2500),
                                    fake_row(3, 1.1, "1.1", 620, 2500), fake_row(5, 2.0, "2", 2345, 2500)};
  const auto lines = lines_of(emit_table(rows));
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_LT(lines[0].find("r = 1.1"), lines[0].find("r = 2"));
  EXPECT_LT(lines[0].find("r = 2"), lines[0].find("r = 10"));
  EXPECT_EQ(lines[1].rfind("3 (200, 200)", 0), 0u);
  EXPECT_NE(lines[1].find("0.248"), std::string::npos);
  EXPECT_NE(lines[1].find("0.872"), std::string::npos);
  EXPECT_NE(lines[2].find("[0.225, 0.273]"), std::string::npos);
  EXPECT_NE(lines[2].find("[0.852, 0.889]"), std::string::npos);
  EXPECT_NE(lines[3].find("0.938"), std::string::npos);
  EXPECT_NE(lines[3].find("0.990"), std::string::npos);
  EXPECT_NE(lines[4].find("[0.923, 0.950]"), std::string::npos);
  EXPECT_NE(lines[1].find('-'), std::string::npos);
  for (const auto& line : lines) EXPECT_NE(line.back(), ' ');
}

TEST(PlotData, ReflectsIntervalAndSortsByR) {
  const std::vector<ResultRow> rows{fake_row(5, 10.0, "10", 9900, 10000), fake_row(5, 2.0, "2", 2345, 2500),
                                    fake_row(3, 2.0, "2", 2180, 2500)};
  const auto series = emit_plot_data(rows);
  ASSERT_EQ(series.size(), 2u);
  const auto lines = lines_of(series.at(5));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "r,extinction_hat,ci_lo_ext,ci_hi_ext,ref_r_pow_minus_k,leaves,reservoir");
  EXPECT_EQ(lines[1], "2,0.062000,0.049720,0.077033,0.03125,200,200");
  EXPECT_EQ(fields_of(lines[2])[0], "10");
  EXPECT_EQ(fields_of(lines[2])[4], "1e-05");
}
