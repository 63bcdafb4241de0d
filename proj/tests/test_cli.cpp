#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string output;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(RWALK_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  for (std::size_t got; (got = fread(buf, 1, sizeof buf, pipe)) > 0;) r.output.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rwalk_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::string demo_csv = std::string(RWALK_DATA_DIR) + "/demo_hospital.csv";

}  // namespace

TEST(Cli, HelpAndVersionExitZero) {
  const auto help = run("--help");
  EXPECT_EQ(help.status, 0);
  EXPECT_NE(help.output.find("calibrate"), std::string::npos);
  const auto version = run("--version");
  EXPECT_EQ(version.status, 0);
  EXPECT_EQ(version.output, "0.1.0\n");
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("analyze --no-such-flag " + demo_csv).status, 1);
  EXPECT_EQ(run("calibrate --kind pink").status, 1);
  EXPECT_EQ(run("analyze --alpha 0.5 " + demo_csv).status, 1);
}

TEST(Cli, MissingInputExitsOneWithMessage) {
  const auto r = run("analyze /nonexistent/file.csv");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("cannot open"), std::string::npos);
}

TEST(Cli, ZeroDispersionCompareExitsTwo) {
  const auto dir = scratch("compare_zero");
  std::ofstream(dir / "a.json") << R"({"d_s": 1.3, "var_ds": 0})";
  std::ofstream(dir / "b.json") << R"({"d_s": 1.4, "var_ds": 0})";
  const auto r = run("compare " + (dir / "a.json").string() + " " + (dir / "b.json").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("no dispersion"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, CalibrateThenCompare) {
  const auto dir = scratch("calibrate");
  const auto w = dir / "white.json", b = dir / "brownian.json";
  ASSERT_EQ(run("calibrate --kind white --n 1329 --m 40 --format json -o " + w.string()).status, 0);
  ASSERT_EQ(run("calibrate --kind brownian --n 1329 --m 40 --format json -o " + b.string()).status, 0);
  const auto ens = nlohmann::json::parse(slurp(w));
  EXPECT_EQ(ens["m"], 40);
  EXPECT_EQ(ens["traces"].size(), 40u);
  const auto r = run("compare " + w.string() + " " + b.string());
  ASSERT_EQ(r.status, 0) << r.output;
  const auto cmp = nlohmann::json::parse(r.output);
  EXPECT_EQ(cmp["result"]["verdict"], "significant");
  EXPECT_EQ(cmp["a"]["source"], w.string());
  fs::remove_all(dir);
}

TEST(Cli, SimulateAndSpectrum) {
  const auto dir = scratch("spectrum");
  const auto csv = dir / "walk.csv";
  ASSERT_EQ(run("simulate --kind brownian --n 4096 -o " + csv.string()).status, 0);
  std::istringstream in(slurp(csv));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "index,trace_0");
  const auto r = run("spectrum " + csv.string() + " --column trace_0 --format json");
  ASSERT_EQ(r.status, 0) << r.output;
  const auto j = nlohmann::json::parse(r.output);
  EXPECT_LT(j["fit"]["slope"].get<double>(), -1.7);
  EXPECT_GT(j["fit"]["slope"].get<double>(), -2.3);
  EXPECT_EQ(run("spectrum " + csv.string() + " --column nope").status, 1);
  fs::remove_all(dir);
}

TEST(Cli, SimulateIsSeedDeterministic) {
  EXPECT_EQ(run("simulate --kind cauchy --n 100 --seed 9").output, run("simulate --kind cauchy --n 100 --seed 9").output);
  EXPECT_NE(run("simulate --kind cauchy --n 100 --seed 9").output, run("simulate --kind cauchy --n 100 --seed 10").output);
}

TEST(Cli, IngestReportsCorrections) {
  const auto r = run("ingest " + demo_csv + " --format json");
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("new_year"), std::string::npos);
}

TEST(Cli, ReportTwiceIsByteIdentical) {
  const auto a = scratch("report_a"), b = scratch("report_b");
  const std::string common = demo_csv + " --m 20 --seed 11 --series inp,dinp,xi";
  const auto ra = run("report " + common + " --out-dir " + a.string());
  const auto rb = run("report " + common + " --out-dir " + b.string() + " --threads 2");
  ASSERT_EQ(ra.status, 0) << ra.output;
  ASSERT_EQ(rb.status, 0) << rb.output;
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto other = b / entry.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path().filename();
    ++files;
  }
  EXPECT_EQ(files, 5u);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, ReportJsonOnlyAndUnknownSeries) {
  const auto dir = scratch("report_json_only");
  ASSERT_EQ(run("report " + demo_csv + " --m 10 --json-only --out-dir " + dir.string()).status, 0);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_FALSE(fs::exists(dir / "series.csv"));
  EXPECT_EQ(run("report " + demo_csv + " --m 10 --series bogus --out-dir " + dir.string()).status, 1);
  fs::remove_all(dir);
}
