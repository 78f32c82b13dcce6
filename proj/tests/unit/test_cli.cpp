#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = casimir::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> v;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) v.push_back(cell);
  return v;
}

Csv parse_csv(const std::string& text) {
  Csv c;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      c.comments.push_back(line);
    } else if (c.columns.empty()) {
      c.columns = split(line);
    } else {
      c.rows.push_back(split(line));
    }
  }
  return c;
}

std::size_t col(const Csv& c, const std::string& name) {
  for (std::size_t i = 0; i < c.columns.size(); ++i)
    if (c.columns[i] == name) return i;
  ADD_FAILURE() << "missing column " << name;
  return 0;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool numeric_cell(const std::string& s, double& v) {
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end != s.c_str() && *end == '\0';
}

void expect_same_table(const Csv& got, const Csv& want, double rel) {
  ASSERT_EQ(got.columns, want.columns);
  ASSERT_EQ(got.rows.size(), want.rows.size());
  for (std::size_t i = 0; i < want.rows.size(); ++i) {
    ASSERT_EQ(got.rows[i].size(), want.rows[i].size());
    for (std::size_t j = 0; j < want.rows[i].size(); ++j) {
      double a = 0.0, b = 0.0;
      if (numeric_cell(want.rows[i][j], b) && numeric_cell(got.rows[i][j], a)) {
        EXPECT_LE(std::abs(a - b), rel * std::abs(b) + 1e-300)
            << "row " << i << " column " << want.columns[j] << ": " << a << " vs " << b;
      } else {
        EXPECT_EQ(got.rows[i][j], want.rows[i][j]) << "row " << i << " column " << want.columns[j];
      }
    }
  }
}

}  // namespace

TEST(Cli, Grids) {
  using casimir::cli::parse_grid;
  EXPECT_EQ(parse_grid("1.5", "z"), std::vector<double>{1.5});
  EXPECT_EQ(parse_grid("1,2,3", "z").size(), 3u);
  const auto g = parse_grid("0.1:10:log3", "z");
  ASSERT_EQ(g.size(), 3u);
  EXPECT_NEAR(g[1], 1.0, 1e-15);
  EXPECT_EQ(parse_grid("0:1:lin5", "z")[1], 0.25);
  EXPECT_THROW(parse_grid("1:2:foo3", "z"), casimir::ValidationError);
  EXPECT_THROW(parse_grid("abc", "z"), casimir::ValidationError);
}

TEST(Cli, NumberFormatting) {
  EXPECT_EQ(casimir::cli::num(-0.0), casimir::cli::num(0.0));
  EXPECT_EQ(casimir::cli::num(std::nan("")), "nan");
}

TEST(Cli, EnergyCsvShape) {
  const auto r = cli({"energy", "--r", "0.01", "--z", "0.5,1,2", "--reproducible"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto c = parse_csv(r.out);
  EXPECT_EQ(c.comments.front(), "# casimir-spheres v0.1.0");
  for (const auto& line : c.comments) EXPECT_EQ(line.rfind("# generated", 0), std::string::npos);
  EXPECT_EQ(c.rows.size(), 3u);
  EXPECT_EQ(c.rows[0][col(c, "branch")], "asymptotic");
  EXPECT_NEAR(std::stod(c.rows[1][col(c, "E_ad")]), casimir::e_ad(1.0), 1e-10);
}

TEST(Cli, TimestampUnlessReproducible) {
  const auto r = cli({"entropy", "--r", "0.01", "--z", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# generated "), std::string::npos);
}

TEST(Cli, Deterministic) {
  const std::vector<std::string> a{"figure", "--id", "2-left", "--reproducible", "--points", "40"};
  EXPECT_EQ(cli(a).out, cli(a).out);
  const auto j1 = cli({"entropy", "--r", "0.3", "--z", "0.5:5:log6", "--reproducible", "--jobs", "1"});
  const auto j3 = cli({"entropy", "--r", "0.3", "--z", "0.5:5:log6", "--reproducible", "--jobs", "3"});
  ASSERT_EQ(j1.code, 0) << j1.err;
  EXPECT_EQ(j1.out, j3.out);
}

TEST(Cli, FigureTwoLeftHasTwoZeros) {
  const auto r = cli({"figure", "--id", "2-left", "--reproducible"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto c = parse_csv(r.out);
  const auto k = col(c, "S_over_Scl");
  int changes = 0;
  for (std::size_t i = 1; i < c.rows.size(); ++i) {
    if ((std::stod(c.rows[i][k]) < 0.0) != (std::stod(c.rows[i - 1][k]) < 0.0)) ++changes;
  }
  EXPECT_EQ(changes, 2);
}

TEST(Cli, SiUnits) {
  const auto r = cli({"energy", "--R", "1e-8", "--d", "1e-6", "--T", "300", "--units", "si", "--reproducible"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto c = parse_csv(r.out);
  const double z = std::stod(c.rows[0][col(c, "z")]);
  const double E = std::stod(c.rows[0][col(c, "E_J")]);
  EXPECT_NEAR(std::stod(c.rows[0][col(c, "T_K")]), 300.0, 1e-9);
  EXPECT_NEAR(E, casimir::si::hbar_c * 1e-12 * casimir::e_ad(z) / (2.0 * casimir::pi * 1e-6), 1e-9 * std::abs(E));
}

TEST(Cli, Json) {
  const auto r = cli({"sweep", "--r", "0.01", "--output", "json", "--reproducible"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["format"], "casimir-spheres");
  EXPECT_FALSE(j.contains("generated"));
  EXPECT_EQ(j["rows"].size(), 200u);
  EXPECT_EQ(j["columns"][0], "z");
  EXPECT_TRUE(j.contains("features"));
}

TEST(Cli, ConfigFileAndPrecedence) {
  const auto path = fs::temp_directory_path() / "casimir_cli_test.ini";
  {
    std::ofstream f(path);
    f << "r=0.01\nz=2\nreproducible=true\n";
  }
  const auto a = cli({"energy", "--config", path.string()});
  ASSERT_EQ(a.code, 0) << a.err;
  auto c = parse_csv(a.out);
  ASSERT_EQ(c.rows.size(), 1u);
  EXPECT_NEAR(std::stod(c.rows[0][col(c, "z")]), 2.0, 1e-15);
  const auto b = cli({"energy", "--config", path.string(), "--z", "3"});
  c = parse_csv(b.out);
  EXPECT_NEAR(std::stod(c.rows[0][col(c, "z")]), 3.0, 1e-15);
  fs::remove(path);
}

TEST(Cli, ExitCodes) {
  auto r = cli({"energy", "--r", "0.6", "--z", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error:domain:", 0), 0u) << r.err;
  r = cli({"energy", "--r", "0.1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error:validation:", 0), 0u) << r.err;
  r = cli({"energy", "--r", "0.1", "--z", "1", "--branch", "bogus"});
  EXPECT_EQ(r.code, 2);
  r = cli({"figure", "--id", "9-left"});
  EXPECT_EQ(r.code, 2);
  r = cli({"entropy", "--r", "0.499", "--z", "1", "--branch", "numeric"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("error:non_convergence:", 0), 0u) << r.err;
}

TEST(Cli, AutoBranchWarning) {
  const auto r = cli({"energy", "--r", "0.045", "--z", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(Cli, ValidateSubset) {
  const auto r = cli({"validate", "--only", "3,4"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, OutFile) {
  const auto path = fs::temp_directory_path() / "casimir_cli_out.csv";
  const auto r = cli({"figure", "--id", "1-right", "--reproducible", "--out", path.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(parse_csv(slurp(path)).rows.size(), 400u);
  fs::remove(path);
}

class GoldenFigure : public ::testing::TestWithParam<std::string> {};

TEST_P(GoldenFigure, MatchesRecordedOutput) {
  const std::string id = GetParam();
  std::vector<std::string> args{"figure", "--id", id, "--reproducible"};
  if (id[0] == '3') {
    for (const char* a : {"--r-list", "0.2,0.4", "--points", "24", "--jobs", "2"}) args.emplace_back(a);
  }
  const auto r = cli(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto golden = fs::path(CASIMIR_TESTDATA_DIR) / "golden" / ("figure_" + id + ".csv");
  ASSERT_TRUE(fs::exists(golden)) << golden;
  expect_same_table(parse_csv(r.out), parse_csv(slurp(golden)), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Cli, GoldenFigure,
                         ::testing::Values("1-left", "1-right", "2-left", "2-right", "3-left", "3-right", "4-left",
                                           "4-right"),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (auto& ch : s)
                             if (ch == '-') ch = '_';
                           return s;
                         });

TEST(CliSlow, SweepNearThresholdHasNoInterval) {
  const auto r = cli({"sweep", "--r", "0.41", "--reproducible", "--jobs", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# feature has_negative_interval=false"), std::string::npos) << r.out.substr(r.out.size() - 400);
}
