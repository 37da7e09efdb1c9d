#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kSpecs = GAUSSMINK_SPECS_DIR;

int run(const std::string& args) {
  const std::string cmd = std::string(GAUSSMINK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gaussmink_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string spec(const std::string& name) { return (kSpecs / name).string(); }

}  // namespace

TEST(Cli, SolveHalfLine) {
  const auto out = scratch("solve_halfline");
  ASSERT_EQ(run("solve --spec " + spec("halfline.json") + " --out " + out.string()), 0);
  const auto doc = json::parse(slurp(out / "result.json"));
  EXPECT_EQ(doc["status"], "converged");
  // Stationary root of Q(a) = a φ(a) at p = 1.
  EXPECT_NEAR(doc["h_star"][0].get<double>(), 0.751791524693564, 1e-4);
  EXPECT_LE(doc["rel_residual"].get<double>(), 1e-6);
  const std::string trace = slurp(out / "trace.csv");
  EXPECT_EQ(trace.rfind("iteration,functional,rel_residual,step,distance\r\n", 0), 0u);
}

TEST(Cli, SolveIsByteDeterministic) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  for (const auto* name : {"planar_m3.json", "octant.json"}) {
    ASSERT_EQ(run("solve --spec " + spec(name) + " --out " + a.string()), 0) << name;
    ASSERT_EQ(run("solve --spec " + spec(name) + " --out " + b.string()), 0) << name;
    EXPECT_EQ(slurp(a / "result.json"), slurp(b / "result.json")) << name;
    EXPECT_EQ(slurp(a / "trace.csv"), slurp(b / "trace.csv")) << name;
  }
}

TEST(Cli, SeedChangesMonteCarloOutput) {
  const auto a = scratch("seed_a");
  const auto b = scratch("seed_b");
  ASSERT_EQ(run("solve --spec " + spec("octant.json") + " --out " + a.string()), 0);
  ASSERT_EQ(run("solve --spec " + spec("octant.json") + " --seed 99 --out " + b.string()), 0);
  EXPECT_NE(slurp(a / "result.json"), slurp(b / "result.json"));
}

TEST(Cli, NotConvergedExitCode) {
  const auto out = scratch("noconv");
  const fs::path file = out / "spec.json";
  std::ofstream(file) << R"({"cone": {"generators": [[1, 0], [0.5, 1]]},
    "directions": [[-0.9805806756909202, -0.19611613513818404], [-0.19611613513818404, -0.9805806756909202]],
    "weights": [1.0, 3.0], "p": 0.5, "solver": {"max_iters": 1, "residual_tol": 1e-12}})";
  EXPECT_EQ(run("solve --spec " + file.string() + " --out " + out.string()), 3);
  EXPECT_EQ(json::parse(slurp(out / "result.json"))["status"], "not_converged");
}

TEST(Cli, InvalidInputsExitTwo) {
  const auto out = scratch("invalid");
  const fs::path bad = out / "bad.json";
  std::ofstream(bad) << "{\"cone\": {\"generators\": [[1, 0], [0, 1]]}, ";
  EXPECT_EQ(run("solve --spec " + bad.string() + " --out " + out.string()), 2);
  EXPECT_EQ(run("solve --spec " + (out / "missing.json").string()), 2);
  EXPECT_EQ(run("solve --spec " + spec("diag1.json") + " --p 0 --out " + out.string()), 2);
  EXPECT_EQ(run("solve"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("verify --spec " + spec("diag1.json") + " --suite nope --out " + out.string()), 2);
  EXPECT_EQ(run("measure --spec " + spec("diag1.json") + " --h 1,2 --out " + out.string()), 2);
  EXPECT_EQ(run("nonunique --spec " + spec("quarter_plane.json") + " --p 2 --out " + out.string()), 2);
  const fs::path dup = out / "dup.json";
  std::ofstream(dup) << R"({"cone": {"generators": [[1, 0], [0, 1]]},
    "directions": [[-0.7071067811865476, -0.7071067811865476], [-0.7071067811865476, -0.7071067811865476]],
    "weights": [1, 1], "p": 1})";
  EXPECT_EQ(run("solve --spec " + dup.string() + " --out " + out.string()), 2);
}

TEST(Cli, VerifySuitesPass) {
  const auto out = scratch("verify");
  for (const auto* suite : {"variational", "oracles", "inequalities"}) {
    EXPECT_EQ(run(std::string("verify --suite ") + suite + " --spec " + spec("planar_m3.json") + " --out " +
                  out.string()),
              0)
        << suite;
    const std::string csv = slurp(out / (std::string("verify_") + suite + ".csv"));
    EXPECT_EQ(csv.rfind("check_id,lhs,rhs,budget,pass\r\n", 0), 0u) << suite;
  }
  EXPECT_EQ(run("verify --suite tail --samples 100000 --spec " + spec("octant.json") + " --out " + out.string()), 0);
}

TEST(Cli, InjectedViolationIsCaught) {
  const auto out = scratch("inject");
  EXPECT_EQ(run("verify --suite inequalities --inject-violation --spec " + spec("diag1.json") + " --out " +
                out.string()),
            1);
  std::istringstream csv(slurp(out / "verify_inequalities.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  int passed = 0;
  while (std::getline(csv, line)) {
    ++rows;
    if (line.find(",true") != std::string::npos) ++passed;
  }
  EXPECT_GT(rows, 0);
  EXPECT_LT(passed, rows);
}

TEST(Cli, NonuniqueWritesPairAndCurve) {
  const auto out = scratch("nonunique");
  ASSERT_EQ(run("nonunique --spec " + spec("quarter_plane.json") + " --p 1 --out " + out.string()), 0);
  const auto doc = json::parse(slurp(out / "pair.json"));
  EXPECT_TRUE(doc["certified"].get<bool>());
  EXPECT_LT(doc["t1"].get<double>(), doc["t_peak"].get<double>());
  EXPECT_LT(doc["t_peak"].get<double>(), doc["t2"].get<double>());
  EXPECT_LE(doc["measure_gap"].get<double>(), 1e-6);
  EXPECT_EQ(doc["uniqueness_verdict"], "CONSISTENT");
  std::istringstream csv(slurp(out / "psi_curve.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  EXPECT_EQ(lines, 257);
}

TEST(Cli, MeasureReportsIdentity) {
  const auto out = scratch("measure");
  ASSERT_EQ(run("measure --spec " + spec("diag1.json") + " --h 1 --out " + out.string()), 0);
  const auto doc = json::parse(slurp(out / "measure.json"));
  EXPECT_NEAR(doc["gaussian_volume"]["value"].get<double>(), 0.133483764331401933, 1e-12);
  EXPECT_NEAR(doc["facets"][0]["sp"]["value"].get<double>(), 0.165190871034016692, 1e-14);
  EXPECT_NEAR(doc["identity_residual"].get<double>(), 0.0, 1e-12);
}
