#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include "test_helpers.hpp"

using testutil::spec;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + " " + std::string(COVERAGE_LAB_CLI) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), pipe)) > 0;) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::map<std::string, std::string> keys(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const auto colon = line.find(": ");
    if (colon != std::string::npos && !out.count(line.substr(0, colon))) out[line.substr(0, colon)] = line.substr(colon + 2);
  }
  return out;
}

std::string quoted(const std::string& s) { return "'" + s + "'"; }

}  // namespace

TEST(Cli, CoverageKeyValues) {
  const CliRun r = run("coverage --classifier " + quoted(spec("fig3.json")) + " --point 5,0");
  ASSERT_EQ(r.code, 0) << r.out;
  auto k = keys(r.out);
  EXPECT_EQ(k["label"], "N");
  EXPECT_EQ(k["kind"], "Bounded");
  EXPECT_NEAR(std::stod(k["radius"]), 1.0, 1e-3);
  EXPECT_EQ(k["method"], "lower_bound");
}

TEST(Cli, CoverageSeveralPointsFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "coverage_lab_cli_points.txt";
  testutil::write_file(path.string(), "# probes\n5,0\n\n-15,10\n");
  const CliRun r = run("coverage --classifier " + quoted(spec("fig3.json")) + " --points-file " + quoted(path.string()));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("point: 5,0"), std::string::npos);
  EXPECT_NE(r.out.find("point: -15,10"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("coverage --classifier " + quoted(spec("refined_linear.json")) + " --point 0,0").code, 3);
  EXPECT_EQ(run("coverage --classifier " + quoted(spec("fig3.json")) + " --point 1,2,3").code, 3);
  EXPECT_EQ(run("coverage --classifier /nonexistent/spec.json --point 0,0").code, 2);
  EXPECT_EQ(run("coverage --classifier " + quoted(spec("fig3.json")) + " --point abc").code, 3);
  EXPECT_EQ(run("field --classifier " + quoted(spec("fig3.json")) + " --grid 3by3").code, 3);
  EXPECT_EQ(run("nonsense").code, 2);
  EXPECT_EQ(run("").code, 2);
  const auto bad = std::filesystem::temp_directory_path() / "coverage_lab_cli_bad.json";
  testutil::write_file(bad.string(), "{\"dimension\": 2, \"labels\": {\"A\": {\"halfspace\": {\"a\": [1], \"b\": 0}}}}");
  const CliRun r = run("coverage --classifier " + quoted(bad.string()) + " --point 0,0");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("labels.A.halfspace.a"), std::string::npos) << r.out;
  std::filesystem::remove(bad);
}

TEST(Cli, StructureAndRefine) {
  auto k = keys(run("structure --classifier " + quoted(spec("refined_linear.json"))).out);
  EXPECT_EQ(k["verdict"], "RefinedLinear");
  EXPECT_EQ(k["hyperplane.normal"], "0,1");
  k = keys(run("structure --classifier " + quoted(spec("fig3.json"))).out);
  EXPECT_EQ(k["verdict"], "NotRefinedLinear");

  const auto out = std::filesystem::temp_directory_path() / "coverage_lab_cli_refined.json";
  ASSERT_EQ(run("refine --classifier " + quoted(spec("linear.json")) + " --out " + quoted(out.string())).code, 0);
  k = keys(run("structure --classifier " + quoted(out.string())).out);
  EXPECT_EQ(k["verdict"], "RefinedLinear");
  std::filesystem::remove(out);
}

TEST(Cli, CompareOrders) {
  const CliRun r = run("compare --classifier " + quoted(spec("refined_linear.json")) + " --classifier " + quoted(spec("fig3.json")) +
                    " --point -15,10 --point 0,0");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("order: first_greater"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("refinement point of the first classifier"), std::string::npos) << r.out;
  EXPECT_EQ(run("compare --classifier " + quoted(spec("fig3.json")) + " --point 0,0").code, 2);
}

TEST(Cli, FieldCsvAndStructuredFiles) {
  CliRun r = run("field --classifier " + quoted(spec("fig3.json")) + " --grid 4x3");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 13);
  const auto out = std::filesystem::temp_directory_path() / "coverage_lab_cli_field.json";
  r = run("field --classifier " + quoted(spec("fig3.json")) + " --grid 4x3 --format structured --out " + quoted(out.string()));
  ASSERT_EQ(r.code, 0) << r.out;
  auto k = keys(r.out);
  EXPECT_EQ(k["points"], "12");
  EXPECT_EQ(k["format"], "structured");
  const auto f = coverage_lab::import_field(out.string());
  EXPECT_EQ(f.points.size(), 12u);
  std::filesystem::remove(out);
}

TEST(Cli, ThreadCountDoesNotChangeResults) {
  const std::string args = "field --classifier " + quoted(spec("fig1.json")) + " --grid 3x2 --budget 500 --seed 4";
  const CliRun one = run(args, "COVERAGE_LAB_THREADS=1");
  const CliRun four = run(args, "COVERAGE_LAB_THREADS=4");
  ASSERT_EQ(one.code, 0) << one.out;
  EXPECT_EQ(one.out, four.out);
  EXPECT_EQ(run(args, "COVERAGE_LAB_THREADS=zero").out, one.out);  // unparsable values fall back to the default
}
