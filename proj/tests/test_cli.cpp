#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;  // stdout
  std::string err;  // stderr
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("peg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  Result peg(const std::string& args) const {
    const auto out = path("stdout.txt"), err = path("stderr.txt");
    const std::string cmd = std::string("\"") + PEG_CLI + "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SolveModelReportsDegenerateFamily) {
  ASSERT_EQ(peg("generate --seed 1 --family model --out " + path("m.json").string()).code, 0);
  const auto r = peg("solve --curves " + path("m.json").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  ASSERT_GT(doc["count"].get<int>(), 0);
  EXPECT_EQ(doc["nondegenerate_count"].get<int>(), 0);
  for (const auto& s : doc["solutions"]) EXPECT_TRUE(s["degenerate_family"].get<bool>());
}

TEST_F(Cli, SolvePerturbedWritesSquares) {
  ASSERT_EQ(peg("generate --seed 7 --family perturbed --out " + path("p.json").string()).code, 0);
  const auto r = peg("solve --curves " + path("p.json").string() + " --grid 64 --tol 1e-10 --out " +
                     path("s.json").string() + " --svg " + path("s.svg").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(slurp(path("s.json")));
  EXPECT_EQ(doc["count"].get<std::size_t>(), doc["solutions"].size());
  for (const auto& s : doc["solutions"]) {
    EXPECT_LT(s["residual_norm"].get<double>(), 1e-10);
    EXPECT_EQ(s["corners"].size(), 4u);
  }
  EXPECT_NE(slurp(path("s.svg")).find("<svg"), std::string::npos);
}

TEST_F(Cli, SolveVerticalPeriodRotatesBack) {
  write("v.json", R"({"curves": [{"kind": "fourier", "class": [0, 1], "cos": [[-0.1, 0]]},
                                 {"kind": "fourier", "class": [0, 1], "cos": [[0.15, 0]]}]})");
  const auto r = peg("solve --curves " + path("v.json").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  for (const auto& s : doc["solutions"]) {
    EXPECT_NEAR(s["side"].get<double>(), 0.25, 1e-10);
    // Corners sit on the vertical lines x = -0.1 and x = 0.15, mod 1.
    for (const auto& c : s["corners"]) {
      const double x = c[0].get<double>();
      const double d = std::min(std::abs(std::remainder(x + 0.1, 1.0)), std::abs(std::remainder(x - 0.15, 1.0)));
      EXPECT_LT(d, 1e-10);
    }
  }
}

TEST_F(Cli, SolveRejectsOverlap) {
  write("o.json", R"({"curves": [{"kind": "polyline", "period": [1, 0], "points": [[0, 0.2]]},
                                 {"kind": "fourier", "class": [1, 0], "cos": [[0, 0.2]]}]})");
  const auto r = peg("solve --curves " + path("o.json").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("curves not disjoint"), std::string::npos);
}

TEST_F(Cli, SolveMalformedNamesField) {
  write("bad.json", R"({"curves": [{"kind": "polyline", "period": [0, 1], "points": [[0, 0], [0.1]]}, {}]})");
  auto r = peg("solve --curves " + path("bad.json").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("$.curves[0].points[1]"), std::string::npos) << r.err;
  r = peg("solve --curves " + path("missing.json").string());
  EXPECT_EQ(r.code, 1);
}

TEST_F(Cli, VerifyReport) {
  const auto r = peg("verify --alpha 0.7 --beta 0.3");
  const auto doc = json::parse(r.out);
  EXPECT_NEAR(doc["mu"].get<double>(), 0.2, 1e-12);
  EXPECT_NEAR(doc["delta"].get<double>(), 0.5, 1e-12);
  EXPECT_LT(doc["tau_symplectic_residual"].get<double>(), 1e-12);
  EXPECT_LT(doc["double_cover_residual"].get<double>(), 1e-12);
  EXPECT_EQ(doc["hf_factors"], json::array({2, 2}));
  EXPECT_EQ(doc["hf_product"].get<int>(), 4);
  // The factor-4 pullback identity fails (measured factor 2), so pass is false
  // and the exit code reports a mathematical failure.
  EXPECT_FALSE(doc["pass"].get<bool>());
  EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, CountExamples) {
  auto r = peg("count --class1 1,0 --class2 1,2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2\n");
  r = peg("count --class1 1,0 --offset1 0.1 --class2 1,0 --offset2 0.1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2\n");
  r = peg("count --class1 2,0 --class2 1,2");
  EXPECT_EQ(r.code, 1);
  r = peg("count --class1 '1;0' --class2 1,2");
  EXPECT_EQ(r.code, 1);
}

TEST_F(Cli, PipelineLinesWithSvg) {
  ASSERT_EQ(peg("generate --seed 0 --family lines --out " + path("l.json").string()).code, 0);
  const auto r = peg("pipeline --curves " + path("l.json").string() + " --out " + path("r.json").string() +
                     " --svg " + path("r.svg").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(slurp(path("r.json")));
  EXPECT_TRUE(doc["converged"].get<bool>());
  EXPECT_NEAR(doc["converged_square"]["side"].get<double>(), 0.4, 1e-6);
  EXPECT_EQ(doc["N"].get<int>(), 4);
  const std::string svg = slurp(path("r.svg"));
  auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = svg.find(needle); pos != std::string::npos; pos = svg.find(needle, pos + 1)) ++n;
    return n;
  };
  EXPECT_EQ(count("<path"), 2u);
  EXPECT_EQ(count("<polygon"), 1u);
  EXPECT_NE(svg.find("viewBox=\"-1.2 -4 2.4 4\""), std::string::npos);
  EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);
}

TEST_F(Cli, PipelineRejectsFourierInput) {
  ASSERT_EQ(peg("generate --seed 0 --family perturbed --out " + path("p.json").string()).code, 0);
  EXPECT_EQ(peg("pipeline --curves " + path("p.json").string()).code, 1);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(peg("").code, 1);
  EXPECT_EQ(peg("solve").code, 1);
  EXPECT_EQ(peg("generate --seed 1 --family spiral").code, 1);
  EXPECT_EQ(peg("frobnicate").code, 1);
  EXPECT_EQ(peg("--help").code, 0);
}

TEST_F(Cli, GenerateIsReproducible) {
  for (const std::string family : {"model", "perturbed", "zigzag", "lines"}) {
    const auto a = peg("generate --seed 42 --family " + family);
    const auto b = peg("generate --seed 42 --family " + family);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    if (family != "lines") {
      EXPECT_NE(a.out, peg("generate --seed 43 --family " + family).out);
    }
  }
}
