#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const double kLcpModulus = std::sqrt((3.0 + std::sqrt(5.0)) / 2.0);

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("polylip_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Exit status of `polylip args` (stdout discarded).
int cli(const std::string& args) {
  std::string cmd = std::string(POLYLIP_BIN) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string data(const std::string& name) { return std::string(POLYLIP_DATA) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json report(const fs::path& dir) { return json::parse(slurp(dir / "report.json")); }

}  // namespace

TEST(Cli, CriterionOnLcpFile) {
  fs::path out = scratch("criterion");
  ASSERT_EQ(cli("criterion --in " + data("lcp.json") + " --out " + out.string()), 0);
  json r = report(out);
  EXPECT_TRUE(r["criterion"].get<bool>());
  EXPECT_NEAR(r["modulus"].get<double>(), kLcpModulus, 1e-9);
  EXPECT_TRUE(r["kernel_witness"].is_null());
  EXPECT_EQ(r["per_stratum"].size(), 9u);
  EXPECT_TRUE(r["checks"]["necessity"]["pass"].get<bool>());
  EXPECT_TRUE(r["checks"]["sufficiency"]["pass"].get<bool>());
  EXPECT_FALSE(r["checks"]["directional"]["pass"].get<bool>());
  EXPECT_TRUE(fs::exists(out / "report.md"));
}

TEST(Cli, ClassicalCriterionFailsWithWitness) {
  fs::path out = scratch("classical");
  fs::path in = out / "p.json";
  std::ofstream(in) << R"({"kind":"lcp","M":[[-1,0],[1,1]],"query":{"X":"whole"}})";
  ASSERT_EQ(cli("criterion --in " + in.string() + " --out " + out.string()), 0);
  json r = report(out);
  EXPECT_FALSE(r["criterion"].get<bool>());
  EXPECT_EQ(r["modulus"], "inf");
  ASSERT_TRUE(r["kernel_witness"].is_array());
  EXPECT_LT(r["kernel_witness"][0].get<double>(), 0.0);
}

TEST(Cli, LevelSetFlagVector) {
  fs::path out = scratch("levelset");
  ASSERT_EQ(cli("levelset --in " + data("abs.json") + " --v 2 --out " + out.string()), 0);
  json r = report(out);
  EXPECT_NEAR(r["lip_X"].get<double>(), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r["classical_lip"].get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(r["routes_agree"].get<bool>());
}

TEST(Cli, EstimateIsDeterministicAndWitnessReplays) {
  fs::path a = scratch("est_a"), b = scratch("est_b"), c = scratch("est_c");
  std::string in = " --in " + data("lcp.json") + " --seed 7 --pairs 2000";
  ASSERT_EQ(cli("estimate" + in + " --out " + a.string()), 0);
  ASSERT_EQ(cli("estimate" + in + " --threads 3 --out " + b.string()), 0);
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
  json r = report(a);
  double best = 0.0;
  for (const json& row : r["per_radius"]) best = std::max(best, row["lower_bound"].get<double>());
  EXPECT_LE(best, kLcpModulus + 1e-3);
  ASSERT_TRUE(fs::exists(a / "witness.json"));
  ASSERT_EQ(cli("estimate --in " + data("lcp.json") + " --replay " + (a / "witness.json").string() + " --out " +
                c.string()),
            0);
  json rep = report(c);
  EXPECT_EQ(rep["ratio"].get<double>(), r["witness"]["kappa"].get<double>());
  EXPECT_FALSE(rep["violates_kappa"].get<bool>());
}

TEST(Cli, ClaimBelowModulusIsFalsified) {
  fs::path out = scratch("claim");
  ASSERT_EQ(cli("estimate --in " + data("lcp.json") + " --pairs 2000 --radii 0.01 --claim 1 --out " + out.string()), 0);
  json r = report(out);
  EXPECT_TRUE(r["falsified"].get<bool>());
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  fs::path out = scratch("config");
  fs::path cfg = out / "cfg.json";
  std::ofstream(cfg) << R"({"seed": 9, "pairs": 300, "radii": [0.01]})";
  ASSERT_EQ(cli("estimate --in " + data("lcp.json") + " --config " + cfg.string() + " --pairs 200 --out " +
                out.string()),
            0);
  json r = report(out);
  EXPECT_EQ(r["seed"].get<int>(), 9);
  EXPECT_EQ(r["pairs_per_radius"].get<int>(), 200);
  EXPECT_EQ(r["per_radius"].size(), 1u);
}

TEST(Cli, ToleranceFromEnvironmentAndFlag) {
  fs::path out = scratch("tol");
  std::string cmd = "POLYLIP_TOL=1e-7 " + std::string(POLYLIP_BIN) + " modulus --in " + data("lcp.json") +
                    " --out " + out.string() + " > /dev/null";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_DOUBLE_EQ(report(out)["tolerance"].get<double>(), 1e-7);
  ASSERT_EQ(std::system((cmd + " --tol 1e-10").c_str()), 0);
  EXPECT_DOUBLE_EQ(report(out)["tolerance"].get<double>(), 1e-10);
  EXPECT_NEAR(report(out)["modulus"].get<double>(), kLcpModulus, 1e-9);
}

TEST(Cli, FunctionAndSublinearCommands) {
  fs::path out = scratch("functions");
  ASSERT_EQ(cli("modulus --in " + data("abs.json") + " --out " + out.string()), 0);
  EXPECT_NEAR(report(out)["modulus"].get<double>(), 1.0, 1e-12);
  ASSERT_EQ(cli("subdiff --in " + data("abs.json") + " --out " + out.string()), 0);
  EXPECT_EQ(report(out)["basic"][0]["vertices"].size(), 2u);
  ASSERT_EQ(cli("sublinear --in " + data("box_support.json") + " --out " + out.string()), 0);
  EXPECT_NEAR(report(out)["modulus"].get<double>(), std::sqrt(2.0), 1e-9);
  ASSERT_EQ(cli("coderivative --in " + data("lcp.json") + " --dx 0,-1 --du 0,1 --out " + out.string()), 0);
  json r = report(out);
  EXPECT_EQ(r["outer_norm_classical"], "inf");
  EXPECT_NEAR(r["outer_norm_projectional"].get<double>(), kLcpModulus, 1e-9);
  EXPECT_EQ(r["directional"]["kernel"].size(), 1u);
}

TEST(Cli, StdinProblem) {
  fs::path out = scratch("stdin");
  std::string cmd = "cat " + data("disk.json") + " | " + std::string(POLYLIP_BIN) + " estimate --in - --out " +
                    out.string() + " > /dev/null";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  for (const json& row : report(out)["per_radius"])
    EXPECT_NEAR(row["lower_bound"].get<double>(), std::sqrt(2.0), 0.05 * std::sqrt(2.0));
}

TEST(Cli, ExitCodes) {
  fs::path out = scratch("exit");
  fs::path bad = out / "bad.json";
  std::ofstream(bad) << R"({"kind":"lcp","M":[[1]],"extra":true})";
  EXPECT_EQ(cli("criterion --in " + bad.string() + " --out " + out.string()), 2);
  EXPECT_EQ(cli("criterion --in " + (out / "missing.json").string() + " --out " + out.string()), 2);
  EXPECT_EQ(cli("levelset --in " + data("abs.json") + " --out " + out.string()), 2);
  EXPECT_EQ(cli("criterion --out " + out.string()), 2);
  EXPECT_EQ(cli("criterion --in " + data("lcp.json") + " --x -1,0 --out " + out.string()), 3);
  EXPECT_EQ(cli("criterion --in " + data("lcp.json") + " --tol 0.5 --out " + out.string()), 2);
}
