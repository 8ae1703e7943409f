#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "delam/config.hpp"
#include "delam/error.hpp"
#include "delam/output.hpp"
#include "delam/simulation.hpp"
#include "support.hpp"

using namespace delam;
using namespace delam::test;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(DELAM_SOURCE_DIR) / "configs";

const char* kMinimal = R"(mode: slider
geometry:
  layout: slider
  length: 0.1
  height: 0.0125
  nx: 1
  ny: 1
material:
  young: 70.0e9
  poisson: 0.0
  chi: 6.25e-3
adhesive:
  k_n: 150.0e9
  k_t: 150.0e9
  alpha: 375.0
loading:
  v_D: [267.0e-6, 0.0]
  T: 0.375
numerics:
  tau: 4.6875e-4
)";

std::string config_error(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config_string(text, "test.cfg", overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("delam_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string timeseries_text(const RunArtifacts& run) {
  std::ostringstream out;
  write_timeseries(out, run.ledger);
  return out.str();
}

}  // namespace

TEST(Config, BundledSliderValues) {
  const RunConfig cfg = parse_config(kConfigs / "slider.cfg");
  EXPECT_EQ(cfg.mode, RunMode::Slider);
  EXPECT_EQ(cfg.geometry.layout, MeshLayout::Slider);
  EXPECT_EQ(cfg.geometry.contact_length, cfg.geometry.height);
  EXPECT_EQ(cfg.material.young, 70e9);
  EXPECT_EQ(cfg.material.chi, 6.25e-3);
  EXPECT_EQ(cfg.adhesive.alpha, 375.0);
  EXPECT_EQ(cfg.loading.dirichlet_velocity, Vec2(267e-6, 0.0));
  EXPECT_EQ(cfg.loading.horizon, 0.375);
  EXPECT_EQ(cfg.numerics.tau, 0.375 / 800);
  EXPECT_EQ(cfg.output.snapshot_stride, 100);
  const SliderParams p = slider_params(cfg);
  EXPECT_EQ(p.stiffness, 150e9);
  EXPECT_EQ(p.velocity, 267e-6);
}

TEST(Config, AllBundledConfigsParse) {
  int n = 0;
  for (const auto& entry : fs::directory_iterator(kConfigs)) {
    if (entry.path().extension() != ".cfg") continue;
    ++n;
    EXPECT_NO_THROW(make_problem(parse_config(entry.path()))) << entry.path();
  }
  EXPECT_GE(n, 6);
  const RunConfig h = parse_config(kConfigs / "exp2d_horizontal.cfg");
  EXPECT_EQ(h.geometry.layout, MeshLayout::Exp2D);
  EXPECT_EQ(h.material.poisson, 0.35);
  EXPECT_EQ(h.adhesive.k_t, 75e9);
  const RunConfig v = parse_config(kConfigs / "exp2d_vertical.cfg");
  EXPECT_EQ(v.loading.dirichlet_velocity, Vec2(0.0, 333.3e-6));
  EXPECT_EQ(v.loading.horizon, 2.8);
}

TEST(Config, EmptyFileListsEveryMissingKey) {
  const std::string msg = config_error("");
  ASSERT_FALSE(msg.empty());
  for (const char* key : {"mode", "geometry.layout", "geometry.length", "material.young", "adhesive.alpha",
                          "loading.v_D", "loading.T"}) {
    EXPECT_NE(msg.find(key), std::string::npos) << key << "\n" << msg;
  }
}

TEST(Config, UnknownKeyReportsLine) {
  std::string text = kMinimal;
  text.replace(text.find("  nx: 1"), 7, "  nz: 1");
  const std::string msg = config_error(text);
  EXPECT_NE(msg.find("test.cfg:6:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("nz"), std::string::npos) << msg;
  EXPECT_NE(config_error(std::string(kMinimal) + "extras: {a: 1}\n").find("unknown key 'extras'"), std::string::npos);
}

TEST(Config, TypeAndConstraintErrorsCollected) {
  std::string text = kMinimal;
  text.replace(text.find("70.0e9"), 6, "stiff");
  text.replace(text.find("poisson: 0.0"), 12, "poisson: 0.7");
  const std::string msg = config_error(text);
  EXPECT_NE(msg.find("young"), std::string::npos) << msg;
  EXPECT_NE(msg.find("poisson"), std::string::npos) << msg;
  EXPECT_NE(config_error(kMinimal, {"numerics.tau=0"}).find("tau"), std::string::npos);
  EXPECT_NE(config_error(kMinimal, {"geometry.layout=exp2d", "geometry.contact_length=0.05"}).find("mode slider"),
            std::string::npos);
  EXPECT_NE(config_error("mode: [1, 2\n").find("test.cfg:"), std::string::npos);
}

TEST(Config, ModeSpecificRequirements) {
  std::string text = kMinimal;
  text.replace(0, 12, "mode: adaptive");
  const std::string msg = config_error(text);
  for (const char* key : {"driver.chi0", "driver.tau0", "driver.chi_final"}) {
    EXPECT_NE(msg.find(key), std::string::npos) << key << "\n" << msg;
  }
  EXPECT_NO_THROW(parse_config_string(text, "x", {"driver.chi0=0.025", "driver.tau0=0.001", "driver.chi_final=0.01"}));
}

TEST(Config, EmitParseRoundTrip) {
  for (const char* name : {"slider.cfg", "slider_adaptive.cfg", "slider_sweep.cfg", "exp2d_vertical.cfg"}) {
    const RunConfig cfg = parse_config(kConfigs / name);
    EXPECT_EQ(parse_config_string(emit_config(cfg)), cfg) << name;
  }
}

TEST(Config, OverridesApplyBeforeValidation) {
  const RunConfig cfg = parse_config_string(kMinimal, "x", {"numerics.tau=1e-3", "loading.v_D=[1e-4, 2e-4]",
                                                           "output.directory=elsewhere"});
  EXPECT_EQ(cfg.numerics.tau, 1e-3);
  EXPECT_EQ(cfg.loading.dirichlet_velocity, Vec2(1e-4, 2e-4));
  EXPECT_EQ(cfg.output.directory, "elsewhere");
  EXPECT_FALSE(config_error(kMinimal, {"numerics.tau"}).empty());
  EXPECT_FALSE(config_error(kMinimal, {"numerics.nope=1"}).empty());
  EXPECT_FALSE(config_error(kMinimal, {"a.b.c=1"}).empty());
}

TEST(Timeseries, HeaderOnlyForZeroHorizon) {
  ProblemSetup p = slider();
  p.load.horizon = 0.0;
  const RunArtifacts run = simulate(p, 6.25e-3, 1e-3);
  EXPECT_EQ(run.steps, 0);
  EXPECT_EQ(timeseries_text(run),
            "k,t,stored_J,viscous_cum_J,adhesive_cum_J,work_cum_J,residual_J,reaction_x_N,reaction_y_N,"
            "bonded_fraction\n");
}

TEST(Timeseries, RerunIsByteIdenticalAndBondedFractionDropsOnce) {
  const RunArtifacts a = simulate(slider(), 6.25e-3, kT / 200);
  const RunArtifacts b = simulate(slider(), 6.25e-3, kT / 200);
  const std::string ta = timeseries_text(a);
  EXPECT_EQ(ta, timeseries_text(b));
  EXPECT_EQ(static_cast<int>(std::count(ta.begin(), ta.end(), '\n')), 201);
  int drops = 0;
  const auto& rows = a.ledger.rows();
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].bonded_fraction != rows[k - 1].bonded_fraction) {
      ++drops;
      EXPECT_EQ(rows[k - 1].bonded_fraction, 1.0);
      EXPECT_EQ(rows[k].bonded_fraction, 0.0);
    }
  }
  EXPECT_EQ(drops, 1);
}

TEST(Snapshot, SliderFieldsInVtkAndCsv) {
  const fs::path dir = scratch("snapshot");
  for (double chi : {0.0, 6.25e-3}) {
    const ProblemSetup p = slider();
    const RunArtifacts run = simulate(p, chi, kT / 200);
    const fs::path vtk = dir / (chi == 0.0 ? "inviscid.vtk" : "viscous.vtk");
    write_field_snapshot(vtk, p.mesh, run.ledger.defect_density(), run.final_state.z, run.final_state.k,
                         run.final_state.t);
    const std::string text = slurp(vtk);
    EXPECT_EQ(text.rfind("# vtk DataFile Version 3.0\n", 0), 0u);
    EXPECT_NE(text.find("CELLS 3 11"), std::string::npos);
    EXPECT_NE(text.find("SCALARS defect_density double 1"), std::string::npos);

    std::istringstream csv(slurp(fs::path(vtk).replace_extension(".csv")));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "kind,index,cx,cy,measure,defect_density,z");
    std::vector<double> defects;
    int contacts = 0;
    while (std::getline(csv, line)) {
      std::vector<std::string> f;
      std::stringstream ls(line);
      for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
      if (f[0] == "triangle") {
        defects.push_back(std::stod(f[5]));
      } else {
        ++contacts;
        EXPECT_EQ(f[0], "contact");
        EXPECT_EQ(std::stod(f[6]), 0.0);
      }
    }
    EXPECT_EQ(contacts, 1);
    ASSERT_EQ(defects.size(), 2u);
    if (chi == 0.0) {
      EXPECT_EQ(defects[0], 0.0);
      EXPECT_EQ(defects[1], 0.0);
    } else {
      EXPECT_GT(defects[0], 0.0);
      EXPECT_NEAR(defects[0], defects[1], 1e-10 * defects[0]);
    }
  }
  EXPECT_THROW(write_field_snapshot(dir / "bad.vtk", slider().mesh, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(1),
                                    0, 0.0),
               std::invalid_argument);
  fs::remove_all(dir);
}

TEST(Snapshot, TwoDimensionalDefectConcentratesOnTheRight) {
  RunConfig cfg = parse_config(kConfigs / "exp2d_horizontal.cfg", {"geometry.nx=40", "geometry.ny=4", "loading.T=0.36"});
  const ProblemSetup p = make_problem(cfg);
  const RunArtifacts run = simulate(p, cfg.material.chi, cfg.numerics.tau);
  const Eigen::VectorXd& d = run.ledger.defect_density();
  ASSERT_EQ(static_cast<std::size_t>(d.size()), p.mesh.num_triangles());
  double lo = 0.0, hi = 0.0, area_lo = 0.0, area_hi = 0.0;
  for (std::size_t t = 0; t < p.mesh.num_triangles(); ++t) {
    EXPECT_GE(d[static_cast<Eigen::Index>(t)], 0.0);
    const auto& tri = p.mesh.triangles()[t];
    const double cx = (p.mesh.nodes()[tri[0]].x() + p.mesh.nodes()[tri[1]].x() + p.mesh.nodes()[tri[2]].x()) / 3.0;
    const double a = p.mesh.signed_area(t);
    if (cx < 0.5 * cfg.geometry.length) {
      lo += d[static_cast<Eigen::Index>(t)] * a;
      area_lo += a;
    } else {
      hi += d[static_cast<Eigen::Index>(t)] * a;
      area_hi += a;
    }
  }
  EXPECT_GT(hi / area_hi, lo / area_lo);
  EXPECT_NEAR(lo + hi, run.ledger.back().viscous_cum, 1e-10 * run.ledger.back().viscous_cum);
}

TEST(Provenance, EchoParsesBack) {
  const fs::path dir = scratch("provenance");
  const RunConfig cfg = parse_config(kConfigs / "slider.cfg");
  write_provenance(dir, cfg);
  const std::string text = slurp(dir / "config.echo.cfg");
  EXPECT_EQ(text.rfind(std::string("# delam ") + std::string(version_string()), 0), 0u);
  EXPECT_EQ(parse_config(dir / "config.echo.cfg"), cfg);
  fs::remove_all(dir);
}

#ifdef DELAM_CLI_PATH
namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + DELAM_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  const std::string out = " --override output.directory=" + dir.string();
  const std::string slider_cfg = " --config " + (kConfigs / "slider.cfg").string();
  EXPECT_EQ(run_cli("oracle --config " + (kConfigs / "slider_oracle.cfg").string() + out), 0);
  EXPECT_TRUE(fs::exists(dir / "oracle.csv"));
  EXPECT_TRUE(fs::exists(dir / "config.echo.cfg"));
  EXPECT_EQ(run_cli("run" + slider_cfg + out + " --override numerics.tau=0.01875"), 0);
  EXPECT_TRUE(fs::exists(dir / "timeseries.csv"));
  EXPECT_EQ(run_cli("run --config " + (dir / "missing.cfg").string()), 2);
  EXPECT_EQ(run_cli("sweep" + slider_cfg + out), 2);
  EXPECT_EQ(run_cli("run" + slider_cfg + " --override material.poisson=0.9"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("adaptive --config " + (kConfigs / "slider_adaptive.cfg").string() + out +
                    " --override driver.gate_C=1e-15 --override driver.max_tau_halvings=0"
                    " --override driver.tau0=0.0375"),
            3);
  fs::remove_all(dir);
}
#endif
