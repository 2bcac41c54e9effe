// Subprocess smoke tests for the command-line tool: exit-code contract,
// output formats, and byte determinism. Heavy constructions are exercised
// elsewhere; every invocation here uses dormant or tiny scales.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(MACLANE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  RunResult res;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(CliExitCodes, UsageErrorsReturnTwo) {
  EXPECT_EQ(run_cli("").exit_code, 2);
  EXPECT_EQ(run_cli("verify nonsense").exit_code, 2);
  EXPECT_EQ(run_cli("polys --family bad --m 1..4").exit_code, 2);
  EXPECT_EQ(run_cli("polys --family rs --m 0..4").exit_code, 2);
  EXPECT_EQ(run_cli("build-and-check --p 0.5").exit_code, 2);
  EXPECT_EQ(run_cli("coeffs --j0 5 --j1 2").exit_code, 2);
}

TEST(CliExitCodes, HelpReturnsZero) {
  EXPECT_EQ(run_cli("--help").exit_code, 0);
}

TEST(CliPolys, SignPolynomialCsv) {
  RunResult r = run_cli("polys --family rs --m 1..8 --p inf");
  ASSERT_EQ(r.exit_code, 0);
  auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 9u);  // header + 8
  EXPECT_EQ(rows[0][0], "m");
  EXPECT_EQ(rows[0][3], "norm");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 6u);
    const long long m = std::stoll(rows[i][0]);
    const double norm = std::stod(rows[i][3]);
    const double bound = std::stod(rows[i][4]);
    const long long ones = std::stoll(rows[i][5]);
    EXPECT_LE(norm, bound);
    EXPECT_GE(ones, (m + 1) / 2);
  }
  // degree-0 and the first nontrivial length have known sup norms
  EXPECT_NEAR(std::stod(rows[1][3]), 1.0, 1e-6);
  EXPECT_NEAR(std::stod(rows[2][3]), 2.0, 1e-3);
}

TEST(CliPolys, SmoothedKernelL2Value) {
  RunResult r = run_cli("polys --family vp --m 4..4 --p 2");
  ASSERT_EQ(r.exit_code, 0);
  auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(std::stod(rows[1][3]), std::sqrt(3.0), 1e-6);
  EXPECT_NEAR(std::stod(rows[1][4]), 6.0, 1e-12);
}

TEST(CliVerify, StirlingReportParses) {
  RunResult r = run_cli("verify stirling");
  ASSERT_EQ(r.exit_code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["kind"], "verify_report");
  EXPECT_TRUE(j["pass"].get<bool>());
  ASSERT_EQ(j["checks"].size(), 1u);
  EXPECT_GT(j["checks"][0]["min_margin_log"].get<double>(), 0.0);
}

TEST(CliVerify, ByteDeterministic) {
  const std::string args = "verify sum --m 1..5 --a 0,0.5";
  RunResult a = run_cli(args);
  RunResult b = run_cli(args);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(CliBuild, DormantDefaultsPassAndWriteArtifacts) {
  fs::path dir = fresh_dir("maclane_cli_dormant");
  RunResult r = run_cli("build-and-check --outdir " + dir.string());
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("build-and-check: PASS"), std::string::npos);
  ASSERT_TRUE(fs::exists(dir / "growth.csv"));
  ASSERT_TRUE(fs::exists(dir / "growth.json"));
  ASSERT_TRUE(fs::exists(dir / "build_check.json"));
  std::ifstream in(dir / "build_check.json");
  auto j = nlohmann::json::parse(in);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["config"]["mode"], "standard");
}

TEST(CliBuild, P1DormantPasses) {
  fs::path dir = fresh_dir("maclane_cli_p1");
  RunResult r = run_cli("build-and-check --mode p1 --rmax 100 --outdir " + dir.string());
  ASSERT_EQ(r.exit_code, 0);
  std::ifstream in(dir / "build_check.json");
  auto j = nlohmann::json::parse(in);
  EXPECT_TRUE(j["pass"].get<bool>());
  ASSERT_FALSE(j["classes"].empty());
  for (const auto& row : j["classes"]) EXPECT_EQ(row["extra"], "1");
}

TEST(CliCoeffs, WindowDumpsSparseEntries) {
  fs::path dir = fresh_dir("maclane_cli_coeffs");
  fs::path ov = dir / "override.txt";
  std::ofstream(ov) << "0 1 0 1\n";  // constant target, unit visit radius
  RunResult r = run_cli("coeffs --gamma 10 --override " + ov.string() +
                        " --j0 1020100 --j1 1020102");
  ASSERT_EQ(r.exit_code, 0);
  auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);  // header + the single surviving entry
  EXPECT_EQ(rows[1][0], "1020100");
  EXPECT_EQ(rows[1][1], "1");
  EXPECT_EQ(rows[1][2], "1");
}

TEST(CliDensity, DormantUnitDensityIsZero) {
  RunResult r = run_cli("density --kind unit --horizon 1000");
  ASSERT_EQ(r.exit_code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["count"].get<long long>(), 0);
  EXPECT_EQ(j["density"].get<double>(), 0.0);
}

TEST(CliConfig, FileProvidesDefaultsFlagsWin) {
  fs::path dir = fresh_dir("maclane_cli_config");
  fs::path cfg = dir / "cfg.json";
  std::ofstream(cfg) << "{\"mode\":\"p1\",\"r_max\":100.0,\"outdir\":\""
                     << (dir / "out_a").string() << "\"}";
  RunResult a = run_cli("build-and-check --config " + cfg.string());
  ASSERT_EQ(a.exit_code, 0);
  {
    std::ifstream in(dir / "out_a" / "build_check.json");
    auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["config"]["mode"], "p1");
  }
  // a flag overrides the same key from the file
  RunResult b = run_cli("build-and-check --config " + cfg.string() +
                        " --mode standard --outdir " + (dir / "out_b").string());
  ASSERT_EQ(b.exit_code, 0);
  {
    std::ifstream in(dir / "out_b" / "build_check.json");
    auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["config"]["mode"], "standard");
  }
}
