#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "reflectlab/polar.hpp"

using namespace reflectlab;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(REFLECTLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string lastLine(const std::string& s) {
  std::string t = s;
  while (!t.empty() && t.back() == '\n') t.pop_back();
  const auto k = t.rfind('\n');
  return k == std::string::npos ? t : t.substr(k + 1);
}

double field(const std::string& line, const std::string& key) {
  const auto k = line.find(key + "=");
  if (k == std::string::npos) return NAN;
  return std::stod(line.substr(k + key.size() + 1));
}

}  // namespace

TEST(Cli, VersionAndUsage) {
  const CliRun v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("0.1.0"), std::string::npos);
  EXPECT_EQ(run("polar --Mu 2 --bogus 1").code, 64);
  EXPECT_EQ(run("polar").code, 64);
  EXPECT_EQ(run("nosuchcommand").code, 64);
}

TEST(Cli, PolarCsvAndSummary) {
  const CliRun r = run("polar --Mu 2 --samples 11");
  ASSERT_EQ(r.code, 0);
  std::istringstream is(r.out);
  std::string header, cols, line;
  std::getline(is, header);
  std::getline(is, cols);
  EXPECT_EQ(header.rfind("# reflectlab 0.1.0 gamma=1.4 tol=1e-08", 0), 0u) << header;
  EXPECT_EQ(cols, "beta_rad,tau_rad,vdx,vdy,rhoD,MD,type");
  int rows = 0;
  while (std::getline(is, line) && line.find('=') == std::string::npos) ++rows;
  EXPECT_EQ(rows, 11);
  const GasConstants k{1.4};
  EXPECT_NEAR(field(line, "tau_star"), polar::criticalAngle(2.0, k).tauStar, 1e-10);
  EXPECT_NEAR(field(line, "tau_s"), polar::sonicAngle(2.0, k).tauS, 1e-10);
}

TEST(Cli, OutputFileKeepsSummaryOnStdout) {
  const std::string path = ::testing::TempDir() + "reflectlab_polar.csv";
  const CliRun r = run("polar --Mu 3 --samples 4 --out " + path);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("tau_star=", 0), 0u);
  std::ifstream f(path);
  std::string first;
  std::getline(f, first);
  EXPECT_EQ(first.rfind("# reflectlab", 0), 0u);
}

TEST(Cli, TrivialJson) {
  const CliRun r = run("trivial");
  ASSERT_EQ(r.code, 0);
  const std::string json = r.out.substr(0, r.out.rfind('}') + 1);
  const nlohmann::json j = nlohmann::json::parse(json);
  EXPECT_NEAR(j["M1"].get<double>(), 3.5670442871, 1e-8);
  EXPECT_EQ(j["reflected_type"], "weak");
  EXPECT_TRUE(j["transonic"].get<bool>());
  EXPECT_NEAR(j["beta0"].get<double>(), 1.527464, 1e-6);
  EXPECT_EQ(j["header"]["version"], "0.1.0");
  EXPECT_NE(lastLine(r.out).find("type=weak"), std::string::npos);
}

TEST(Cli, PencilRightAngleNeumann) {
  const CliRun r = run(
      "pencil --phi1 0 --phi2 1.5707963267948966 --gamma1 1.5707963267948966 "
      "--gamma2 1.5707963267948966");
  ASSERT_EQ(r.code, 0);
  const std::string s = lastLine(r.out);
  EXPECT_NEAR(field(s, "beta0"), 0.0, 1e-12);
  EXPECT_NEAR(field(s, "beta1"), 2.0, 1e-12);
  EXPECT_EQ(run("pencil --phi1 1 --phi2 1 --gamma1 0 --gamma2 0").code, 1);
}

TEST(Cli, PerturbZeroIsOneIteration) {
  const CliRun r = run("perturb --dtheta 0 --mesh-h 0.0625");
  ASSERT_EQ(r.code, 0);
  const std::string s = lastLine(r.out);
  EXPECT_EQ(field(s, "iterations"), 1.0);
  EXPECT_EQ(field(s, "weak"), 1.0);
  EXPECT_EQ(field(s, "transonic"), 1.0);
}

TEST(Cli, LinsolveSummary) {
  const CliRun r = run("linsolve --mesh-h 0.05");
  ASSERT_EQ(r.code, 0);
  const std::string s = lastLine(r.out);
  EXPECT_GT(field(s, "gap"), 100.0);
  EXPECT_NE(s.find("max_principle=ok"), std::string::npos);
  EXPECT_NEAR(field(s, "beta0"), 1.52746, 1e-5);
}

TEST(Cli, DomainErrorsExitOne) {
  EXPECT_EQ(run("polar --Mu 0.5").code, 1);
  EXPECT_EQ(run("trivial --gamma 0.9").code, 1);
  EXPECT_EQ(run("trivial --xi-a 0.3").code, 1);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  for (const char* args : {"polar --Mu 2.5 --samples 50", "trivial", "transition --points 4"}) {
    const CliRun a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}
