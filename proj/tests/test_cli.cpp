#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "experiments.hpp"

using namespace spinlhv;
using namespace spinlhv::tools;

namespace {

struct ToolRun {
  int code;
  std::string out;
};

ToolRun run_tool(const std::string& args) {
  const std::string cmd = std::string(SPINLHV_TOOL_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

struct Table {
  std::vector<std::string> comments;
  std::string header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    std::stringstream in(header);
    std::string field;
    for (std::size_t i = 0; std::getline(in, field, ','); ++i)
      if (field == name) return i;
    throw std::out_of_range(name);
  }
  const std::vector<double>& nearest(double tau) const {
    const std::vector<double>* best = &rows.front();
    for (const auto& r : rows)
      if (std::abs(r[0] - tau) < std::abs((*best)[0] - tau)) best = &r;
    return *best;
  }
};

Table parse_csv(const std::string& text) {
  Table t;
  std::stringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line);
    } else if (t.header.empty()) {
      t.header = line;
    } else {
      std::vector<double> row;
      std::stringstream fields(line);
      std::string f;
      while (std::getline(fields, f, ',')) row.push_back(std::stod(f));
      t.rows.push_back(row);
    }
  }
  return t;
}

Table fig_rows(void (*driver)(const ExperimentConfig&, std::ostream&), const ExperimentConfig& c) {
  std::ostringstream out;
  driver(c, out);
  return parse_csv(out.str());
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("spinlhv_test_" + name);
}

}  // namespace

TEST(Labels, ParseForms) {
  EXPECT_TRUE(parse_label("inf").at_infinity);
  EXPECT_EQ(parse_label("0.5,-2").w, cplx(0.5, -2.0));
  EXPECT_EQ(parse_label("0.70710678").w, cplx(0.70710678, 0.0));
  const auto w = parse_label("0:0");
  EXPECT_NEAR(w.w.real(), 1.0, 1e-15);
  EXPECT_NEAR(w.w.imag(), 0.0, 1e-15);
  EXPECT_THROW(parse_label("1:2"), UsageError);
  EXPECT_THROW(parse_label("abc"), UsageError);
  EXPECT_THROW(parse_label("1,2,3"), UsageError);
}

TEST(DeltaTag, Formats) {
  EXPECT_EQ(delta_tag(0.2), "d02");
  EXPECT_EQ(delta_tag(0.6), "d06");
  EXPECT_EQ(delta_tag(1.0), "d10");
  EXPECT_EQ(delta_tag(0.25), "d025");
}

TEST(Config, Validation) {
  ExperimentConfig c = fig2_defaults();
  c.steps = 1;
  EXPECT_THROW(c.validate(), UsageError);
  c = fig2_defaults();
  c.deltas = {1.5};
  EXPECT_THROW(c.validate(), UsageError);
  c = check_defaults();
  c.deltas = {1.5};
  EXPECT_NO_THROW(c.validate());
  c = fig1_defaults();
  c.tau_max = NAN;
  EXPECT_THROW(c.validate(), UsageError);
  c = fig1_defaults();
  c.steps = 2;
  EXPECT_EQ(c.tau_grid(), (std::vector<double>{0.0, 6.0 * kPi}));
}

TEST(Fig1, DefaultSeries) {
  const Table t = fig_rows(run_fig1, fig1_defaults());
  EXPECT_EQ(t.header, "tau,cq,epsilon,bmax_quantum,violation_V");
  ASSERT_EQ(t.rows.size(), 601u);
  ASSERT_EQ(t.comments.size(), 1u);
  EXPECT_EQ(t.comments[0].rfind("# scenario=fig1;", 0), 0u);
  const std::size_t eps = t.column("epsilon"), bmax = t.column("bmax_quantum");
  EXPECT_GT(t.nearest(kPi)[bmax], 2.5);
  EXPECT_NEAR(t.nearest(kPi)[eps], 1.0, 1e-6);
  EXPECT_LE(t.nearest(kTwoPi)[bmax], 2.0 + 1e-6);
  EXPECT_LE(t.nearest(2 * kTwoPi)[bmax], 2.0 + 1e-6);
  for (const auto& r : t.rows) EXPECT_LE(r[bmax], 2.0 * std::sqrt(2.0) + 1e-9);
}

TEST(Fig2, FastSeries) {
  ExperimentConfig c = fig2_defaults();
  c.quad = {32, 32, std::nullopt};
  c.fast = true;
  c.steps = 61;
  const Table t = fig_rows(run_fig2, c);
  EXPECT_EQ(t.header, "tau,cq,ccl_d02,ccl_d06,ccl_d10,bmax_quantum,bmax_cl_d02,bmax_cl_d06,bmax_cl_d10");
  ASSERT_EQ(t.rows.size(), 61u);
  EXPECT_NE(t.comments[0].find("fast=true"), std::string::npos);
  for (const auto& r : t.rows) {
    EXPECT_LE(r[2], r[3] + 1e-12);
    EXPECT_LE(r[3], r[4] + 1e-12);
    for (std::size_t k = 6; k <= 8; ++k) EXPECT_LE(r[k], 2.0 + 1e-6);
  }
  EXPECT_NEAR(t.nearest(kPi)[1], 0.5, 1e-9);
}

TEST(Fig2, DefaultQuadratureHeadRows) {
  ExperimentConfig c = fig2_defaults();
  c.tau_max = kPi;
  c.steps = 3;
  const Table t = fig_rows(run_fig2, c);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_NEAR(t.rows[2][1], 0.5, 1e-9);
  EXPECT_NEAR(t.rows[2][4], 0.25, 5e-6 * 0.25);
}

TEST(Check, DefaultSuitePasses) {
  std::ostringstream report, csv;
  const auto rows = run_check(check_defaults(), report, csv);
  EXPECT_GE(rows.size(), 30u);
  for (const auto& r : rows) EXPECT_TRUE(r.passed) << r.module << "." << r.invariant << ": " << r.detail;
  std::stringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line[0], '#');
  std::getline(lines, line);
  EXPECT_EQ(line, "module,invariant,status,detail");
  EXPECT_NE(report.str().find("0 failed"), std::string::npos);
}

TEST(Eval, Examples) {
  ExperimentConfig c = eval_defaults();
  c.tau = 3.14159265358979;
  EXPECT_NEAR(eval(c, "cq"), 0.5, 1e-9);
  c = eval_defaults();
  c.alpha = 0.0;
  EXPECT_EQ(eval(c, "ccl_limit"), 0.25);
  EXPECT_EQ(eval(c, "omega_q"), 0.125);
  EXPECT_THROW(eval(c, "nonsense"), UsageError);
  EXPECT_EQ(eval_quantities().size(), 13u);
}

TEST(Tool, EvalPrintsFullPrecision) {
  const ToolRun r = run_tool("eval cq --w0 1 --tau 3.14159265358979");
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(r.out), 0.5, 1e-9);
  EXPECT_EQ(run_tool("eval ccl_limit --delta 1 --alpha 0").out, "0.25\n");
  EXPECT_EQ(run_tool("eval omega_q --p0A 0 --p0B 0").out, "0.125\n");
}

TEST(Tool, UsageErrorsExitTwo) {
  EXPECT_EQ(run_tool("eval nonsense").code, 2);
  EXPECT_EQ(run_tool("").code, 2);
  EXPECT_EQ(run_tool("fig1 --steps 1").code, 2);
  EXPECT_EQ(run_tool("fig2 --delta 0.2,x").code, 2);
  EXPECT_EQ(run_tool("fig2 --delta 1.5").code, 2);
  EXPECT_EQ(run_tool("fig1 --quad 7,8").code, 2);
  EXPECT_EQ(run_tool("fig1 --bogus").code, 2);
  EXPECT_EQ(run_tool("fig1 --config /nonexistent/file").code, 2);
  EXPECT_EQ(run_tool("--help").code, 0);
}

TEST(Tool, StepsTwoGivesEndpoints) {
  const ToolRun r = run_tool("fig1 --steps 2");
  ASSERT_EQ(r.code, 0);
  const Table t = parse_csv(r.out);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0], 0.0);
  EXPECT_NEAR(t.rows[1][0], 6.0 * kPi, 1e-15);
}

TEST(Tool, DeterministicOutput) {
  const std::string args = "fig2 --fast --steps 21 --seed 7";
  const ToolRun a = run_tool(args), b = run_tool(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const ToolRun c = run_tool("fig1 --steps 31 --seed 3"), d = run_tool("fig1 --steps 31 --seed 3");
  EXPECT_EQ(c.out, d.out);
}

TEST(Tool, OutWritesFile) {
  const auto path = temp_file("fig1.csv");
  std::filesystem::remove(path);
  const ToolRun r = run_tool("fig1 --steps 5 --out " + path.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(parse_csv(text.str()).rows.size(), 5u);
  std::filesystem::remove(path);
}

TEST(Tool, ConfigFileWithFlagOverride) {
  const auto path = temp_file("config.txt");
  {
    std::ofstream cfg(path);
    cfg << "# sweep\nsteps = 4\ntau-max=3.0\nfast=true\n";
  }
  ToolRun r = run_tool("fig2 --config " + path.string());
  ASSERT_EQ(r.code, 0);
  Table t = parse_csv(r.out);
  EXPECT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows.back()[0], 3.0);
  EXPECT_NE(t.comments[0].find("fast=true"), std::string::npos);

  r = run_tool("fig2 --config " + path.string() + " --steps 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(parse_csv(r.out).rows.size(), 3u);
  r = run_tool("fig2 --steps 3 --config " + path.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(parse_csv(r.out).rows.size(), 3u);
  std::filesystem::remove(path);
}

TEST(Tool, CheckFaultInjection) {
  ToolRun r = run_tool("check --delta 1.5");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL classical.nonnegativity"), std::string::npos);

  r = run_tool("check --quad 16,8");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("doubling"), std::string::npos);
}

TEST(Tool, CheckCsvRowPerInvariant) {
  const auto path = temp_file("check.csv");
  const ToolRun r = run_tool("check --out " + path.string());
  EXPECT_EQ(r.code, 0);
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_GE(lines.size(), 3u);
  EXPECT_EQ(lines[1], "module,invariant,status,detail");
  int pass_lines = 0;
  std::stringstream report(r.out);
  while (std::getline(report, line))
    if (line.rfind("PASS ", 0) == 0) ++pass_lines;
  EXPECT_EQ(static_cast<std::size_t>(pass_lines), lines.size() - 2);
  std::filesystem::remove(path);
}
