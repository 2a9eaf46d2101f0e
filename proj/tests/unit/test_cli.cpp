#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/initial_data.hpp"
#include "cli/verify.hpp"

namespace af = anisoflow;
namespace cli = anisoflow::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = ANISOFLOW_CONFIG_DIR;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("anisoflow_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                         "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return path_ / name;
  }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kCircle = R"(
[profile]
n = 1
k = 1
alpha = 1
beta = 2

[grid]
N = 64

[initial]
kind = fourier
coefficients = const:1, cos2:0.1

[control]
t_end = 0.5
record_every = 5
)";

std::string with_output(const std::string& base, const fs::path& dir, const std::string& stem) {
  return base + "\n[output]\ncsv_path = " + (dir / (stem + ".csv")).string() +
         "\nplot_path = " + (dir / (stem + ".svg")).string() +
         "\ncheckpoint_path = " + (dir / (stem + ".ckpt")).string() + "\n";
}

class ThreadEnv {
 public:
  explicit ThreadEnv(const char* value) { setenv("ANISOFLOW_THREADS", value, 1); }
  ~ThreadEnv() { unsetenv("ANISOFLOW_THREADS"); }
};

}  // namespace

TEST(Config, ParsesCircleExample) {
  const auto c = cli::parse_config(kCircle);
  EXPECT_EQ(c.profile.n(), 1);
  EXPECT_EQ(c.profile.beta(), 2.0);
  EXPECT_EQ(c.grid, af::SphericalGrid::circle(64));
  EXPECT_EQ(c.initial.kind, cli::InitialKind::Fourier);
  ASSERT_EQ(c.initial.terms.size(), 2u);
  EXPECT_EQ(c.initial.terms[1].name, "cos2");
  EXPECT_EQ(c.initial.terms[1].coefficient, 0.1);
  EXPECT_EQ(c.control.t_end, 0.5);
  EXPECT_EQ(c.control.cfl, af::StepControl{}.cfl);
  EXPECT_TRUE(c.output.csv_path.empty());
}

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"circle_cos2.cfg", "circle_cos2_monitor.cfg", "sphere_zonal_expflat.cfg", "sphere_ode_beta3.cfg"}) {
    EXPECT_NO_THROW(cli::load_config(kConfigs / name)) << name;
  }
  const auto c = cli::load_config(kConfigs / "sphere_zonal_expflat.cfg");
  EXPECT_EQ(c.grid, af::SphericalGrid::sphere(64, 128));
  EXPECT_EQ(c.profile.g().kind, af::GKind::ExpFlat);
}

TEST(Config, PrintParseRoundTrip) {
  for (const char* name : {"circle_cos2_monitor.cfg", "sphere_zonal_expflat.cfg", "sphere_ode_beta3.cfg"}) {
    const auto c = cli::load_config(kConfigs / name);
    EXPECT_TRUE(cli::parse_config(cli::print_config(c)) == c) << name;
  }
}

TEST(Config, ReportsEveryProblemWithLocation) {
  const std::string bad = R"(
[profile]
n = 1
k = 2
alpha = 1
beta = 2
colour = blue

[grid]
N = 8

[weird]
x = 1
)";
  try {
    cli::parse_config(bad);
    FAIL() << "expected ConfigError";
  } catch (const cli::ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("colour"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 7"), std::string::npos) << msg;
    EXPECT_NE(msg.find("weird"), std::string::npos) << msg;
    EXPECT_EQ(e.problems().size(), 2u) << msg;
  }
}

TEST(Config, CollectsSemanticProblems) {
  try {
    cli::parse_config("[profile]\nn = 1\nk = 2\nalpha = 1\nbeta = 2\n[grid]\nN = 8\n");
    FAIL() << "expected ConfigError";
  } catch (const cli::ConfigError& e) {
    ASSERT_EQ(e.problems().size(), 2u) << e.what();
    EXPECT_NE(e.problems()[0].find("k must satisfy"), std::string::npos) << e.what();
    EXPECT_NE(e.problems()[1].find("[grid] N"), std::string::npos) << e.what();
  }
}

TEST(Config, RejectsSyntaxAndDuplicates) {
  EXPECT_THROW(cli::parse_config("[profile]\nn 1\n"), cli::ConfigError);
  EXPECT_THROW(cli::parse_config(std::string(kCircle) + "\n[grid]\nN = 32\n"), cli::ConfigError);
  EXPECT_THROW(cli::parse_config("[profile]\nn = 1\nn = 1\nk = 1\nalpha = 1\nbeta = 2\n"), cli::ConfigError);
  EXPECT_THROW(cli::parse_config("[profile]\nn = 1\nk = 1\nalpha = x\nbeta = 2\n"), cli::ConfigError);
}

TEST(Config, RejectsInapplicableKeys) {
  std::string c = kCircle;
  c.replace(c.find("beta = 2"), 8, "beta = 2\ng.l = 3");
  EXPECT_THROW(cli::parse_config(c), cli::ConfigError);
  std::string s = kCircle;
  s.replace(s.find("coefficients"), 0, "r0 = 2\n");
  EXPECT_THROW(cli::parse_config(s), cli::ConfigError);
}

TEST(Config, RejectsInadmissibleProfile) {
  std::string c = kCircle;
  c.replace(c.find("beta = 2"), 8, "beta = 2\ng.kind = monomial\ng.l = 1");
  try {
    cli::parse_config(c);
    FAIL() << "expected ConfigError";
  } catch (const cli::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("not admissible"), std::string::npos) << e.what();
  }
  EXPECT_NO_THROW(cli::parse_config(c, {}, cli::ParseOptions{false}));
}

TEST(Config, RejectsNonPositiveInitialRadius) {
  std::string c = kCircle;
  c.replace(c.find("cos2:0.1"), 8, "cos2:1.5");
  EXPECT_THROW(cli::parse_config(c), cli::ConfigError);
}

TEST(InitialData, BasisFunctions) {
  EXPECT_EQ(cli::basis_value(1, "const", 0.3, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(cli::basis_value(1, "cos3", 0.3, 0.0), std::cos(0.9));
  EXPECT_DOUBLE_EQ(cli::basis_value(1, "sin2", 0.3, 0.0), std::sin(0.6));
  const double x = std::cos(0.4);
  EXPECT_NEAR(cli::basis_value(2, "Y2_0", 0.4, 1.0), 1.5 * x * x - 0.5, 1e-15);
  EXPECT_NEAR(cli::basis_value(2, "Y1_1", 0.4, 1.0), std::sin(0.4) * std::cos(1.0), 1e-15);
  EXPECT_NEAR(cli::basis_value(2, "Y1_-1", 0.4, 1.0), std::sin(0.4) * std::sin(1.0), 1e-15);
  EXPECT_THROW(cli::basis_value(2, "cos2", 0.4, 1.0), std::invalid_argument);
  EXPECT_THROW(cli::basis_value(2, "Y1_2", 0.4, 1.0), std::invalid_argument);
}

TEST(InitialData, FileInput) {
  TempDir dir;
  const auto grid = af::SphericalGrid::circle(32);
  {
    std::ofstream f(dir.path() / "g.txt");
    af::write_graph(f, af::RadialGraph::sphere(grid, 1.25));
  }
  cli::InitialData id;
  id.kind = cli::InitialKind::File;
  id.path = "g.txt";
  const auto g = cli::make_initial_graph(grid, id, dir.path());
  EXPECT_EQ(g, af::RadialGraph::sphere(grid, 1.25));
  EXPECT_THROW(cli::make_initial_graph(af::SphericalGrid::circle(64), id, dir.path()), cli::ConfigError);
}

TEST(Run, ShippedCircleViolatesConeAtStart) {
  std::stringstream out, err;
  TempDir dir;
  const fs::path cfg = dir.write("c.cfg", slurp(kConfigs / "circle_cos2.cfg").substr(0, slurp(kConfigs / "circle_cos2.cfg").find("[output]")));
  EXPECT_EQ(cli::cmd_run(cfg, {}, out, err), cli::kExitRuntime);
  EXPECT_NE(err.str().find("ConeViolation"), std::string::npos) << err.str();
  EXPECT_NE(err.str().find("tau = 0"), std::string::npos) << err.str();
}

TEST(Run, MonitoredCircleConverges) {
  TempDir dir;
  std::string text = kCircle;
  text.replace(text.find("cos2:0.1"), 8, "cos2:0.3");
  text.replace(text.find("t_end = 0.5"), 11, "t_end = 20\ncone_policy = monitor\nsphericity_stop = 1e-3");
  const fs::path cfg = dir.write("m.cfg", with_output(text, dir.path(), "m"));
  std::stringstream out, err;
  ASSERT_EQ(cli::cmd_run(cfg, {}, out, err), cli::kExitOk) << err.str();
  EXPECT_NE(out.str().find("stop=sphericity_stop"), std::string::npos) << out.str();
  const std::string svg = slurp(dir.path() / "m.svg");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
}

TEST(Run, UnwritableOutputIsConfigError) {
  TempDir dir;
  const std::string text = std::string(kCircle) + "\n[output]\ncsv_path = " + (dir.path() / "no/such/dir/x.csv").string() + "\n";
  std::stringstream out, err;
  EXPECT_EQ(cli::cmd_run(dir.write("u.cfg", text), {}, out, err), cli::kExitConfig);
}

TEST(Run, MissingConfigIsConfigError) {
  std::stringstream out, err;
  EXPECT_EQ(cli::cmd_run("/nonexistent/x.cfg", {}, out, err), cli::kExitConfig);
}

TEST(Run, OutputsIndependentOfThreadsAndRepeats) {
  TempDir dir;
  std::string text = "[profile]\nn = 2\nk = 2\nalpha = 1\nbeta = 4\ng.kind = expflat\ng.p = 1\n"
                     "[grid]\nN_lat = 16\nN_lon = 32\n"
                     "[initial]\nkind = fourier\ncoefficients = const:1, Y2_0:0.1, Y2_1:0.02\n"
                     "[control]\nmax_steps = 40\nrecord_every = 4\n";
  std::vector<std::string> csvs, ckpts;
  for (const char* threads : {"1", "3", "1"}) {
    ThreadEnv env(threads);
    const std::string stem = std::string("t") + std::to_string(csvs.size());
    std::stringstream out, err;
    ASSERT_EQ(cli::cmd_run(dir.write(stem + ".cfg", with_output(text, dir.path(), stem)), {}, out, err), cli::kExitOk)
        << err.str();
    csvs.push_back(slurp(dir.path() / (stem + ".csv")));
    ckpts.push_back(slurp(dir.path() / (stem + ".ckpt")));
  }
  EXPECT_FALSE(csvs[0].empty());
  EXPECT_EQ(csvs[0], csvs[1]);
  EXPECT_EQ(csvs[0], csvs[2]);
  EXPECT_EQ(ckpts[0], ckpts[1]);
}

TEST(Run, ResumeReproducesUninterruptedRun) {
  TempDir dir;
  std::string full = kCircle;
  full.replace(full.find("t_end = 0.5"), 11, "t_end = 0.5\nmax_steps = 60");
  std::string half = full;
  half.replace(half.find("max_steps = 60"), 14, "max_steps = 25");
  std::stringstream out, err;
  ASSERT_EQ(cli::cmd_run(dir.write("f.cfg", with_output(full, dir.path(), "f")), {}, out, err), cli::kExitOk) << err.str();
  ASSERT_EQ(cli::cmd_run(dir.write("h.cfg", with_output(half, dir.path(), "h")), {}, out, err), cli::kExitOk) << err.str();
  ASSERT_EQ(cli::cmd_run(dir.write("r.cfg", with_output(full, dir.path(), "r")), {dir.path() / "h.ckpt"}, out, err),
            cli::kExitOk)
      << err.str();
  EXPECT_EQ(slurp(dir.path() / "f.ckpt"), slurp(dir.path() / "r.ckpt"));

  std::string other = full;
  other.replace(other.find("N = 64"), 6, "N = 32");
  EXPECT_EQ(cli::cmd_run(dir.write("o.cfg", other), {dir.path() / "h.ckpt"}, out, err), cli::kExitConfig);
}

TEST(Verify, AllSuitesPass) {
  std::stringstream out, err;
  EXPECT_EQ(cli::cmd_verify("all", out, err), cli::kExitOk) << out.str() << err.str();
  for (const auto& name : cli::kSuiteNames) EXPECT_NE(out.str().find(name), std::string::npos);
}

TEST(Verify, BrokenPartialsAreCaught) {
  cli::VerifyHooks hooks;
  hooks.partials = [](const af::CurvatureVector& kappa, int k) {
    auto p = af::sigma_k_partials(kappa, k);
    p[0] *= 1.0 + 1e-6;
    return p;
  };
  std::stringstream out, err;
  EXPECT_EQ(cli::cmd_verify("symfunc", out, err, hooks), cli::kExitVerify);
  EXPECT_NE(out.str().find("FAIL"), std::string::npos) << out.str();
}

TEST(Verify, UnknownTargetIsConfigError) {
  std::stringstream out, err;
  EXPECT_EQ(cli::cmd_verify("no-such-suite", out, err), cli::kExitConfig);
}

TEST(Verify, ProfileReportOfConfig) {
  TempDir dir;
  std::string text = kCircle;
  text.replace(text.find("beta = 2"), 8, "beta = 2\ng.kind = bump\ng.epsilon = 0.5\ng.p = 1");
  std::stringstream out, err;
  EXPECT_EQ(cli::cmd_verify(dir.write("b.cfg", text).string(), out, err), cli::kExitOk) << out.str() << err.str();

  std::string bad = kCircle;
  bad.replace(bad.find("beta = 2"), 8, "beta = 2\ng.kind = monomial\ng.l = 1");
  std::stringstream out2;
  EXPECT_EQ(cli::cmd_verify(dir.write("m.cfg", bad).string(), out2, err), cli::kExitVerify) << out2.str();
}

TEST(OdeCompare, ShippedConfigPasses) {
  std::stringstream out, err;
  EXPECT_EQ(cli::cmd_ode_compare(kConfigs / "sphere_ode_beta3.cfg", out, err), cli::kExitOk) << out.str() << err.str();
  EXPECT_NE(out.str().find("closed_form=1.3333"), std::string::npos) << out.str();
}

TEST(OdeCompare, NeedsSphereData) {
  TempDir dir;
  std::stringstream out, err;
  EXPECT_EQ(cli::cmd_ode_compare(dir.write("c.cfg", kCircle), out, err), cli::kExitConfig);
}

TEST(Cli, ArgumentErrors) {
  std::stringstream out, err;
  const char* none[] = {"anisoflow"};
  EXPECT_EQ(cli::run_cli(1, const_cast<char**>(none), out, err), cli::kExitConfig);
  const char* bogus[] = {"anisoflow", "frobnicate"};
  EXPECT_EQ(cli::run_cli(2, const_cast<char**>(bogus), out, err), cli::kExitConfig);
  const char* verify[] = {"anisoflow", "verify", "sphere-ode"};
  EXPECT_EQ(cli::run_cli(3, const_cast<char**>(verify), out, err), cli::kExitOk) << err.str();
}
