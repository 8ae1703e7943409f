// delam: command-line front end.
//
//   delam run      --config <path> [--override key=value ...]
//   delam sweep    --config <path> [...]
//   delam adaptive --config <path> [...]
//   delam oracle   --config <path> [...]
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure, 1 other.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "delam/config.hpp"
#include "delam/driver.hpp"
#include "delam/error.hpp"
#include "delam/output.hpp"
#include "delam/simulation.hpp"
#include "delam/slider_oracle.hpp"

namespace fs = std::filesystem;
using namespace delam;

namespace {

void require_mode(const RunConfig& cfg, std::initializer_list<RunMode> allowed, const char* command) {
  for (RunMode m : allowed) {
    if (cfg.mode == m) return;
  }
  throw ConfigError(fmt::format("config mode is '{}', which `delam {}` does not run (override with --override mode=...)",
                                to_string(cfg.mode), command));
}

std::string snapshot_name(int k) { return fmt::format("step_{:07d}.vtk", k); }

void summarize(const RunArtifacts& run) {
  const auto& last = run.ledger.back();
  fmt::print("chi = {:.6g} s, tau = {:.6g} s, steps = {}\n", run.chi, run.tau, run.steps);
  fmt::print("first rupture t = {:.9g} s, last rupture t = {:.9g} s, bonded fraction = {:.6g}\n",
             run.first_rupture(), run.last_rupture(), last.bonded_fraction);
  fmt::print("energy: stored {:.9g} J, viscous {:.9g} J, adhesive {:.9g} J, work {:.9g} J\n", last.stored,
             last.viscous_cum, last.adhesive_cum, last.work_cum);
  fmt::print("residual: L1 = {:.6e} J s, Linf = {:.6e} J\n", run.norms.l1, run.norms.linf);
  fmt::print("qp iterations = {}, factorizations = {}, semistable = {}\n", run.qp_iterations, run.factorizations,
             run.semistable ? "yes" : "no");
}

// Whether viscous dissipation concentrates on the triangles touching the glued boundary.
void report_localization(const Mesh2D& mesh, const Eigen::VectorXd& defect) {
  std::vector<bool> on_contact(mesh.num_nodes(), false);
  for (int v : mesh.contact_nodes()) on_contact[static_cast<std::size_t>(v)] = true;
  double near = 0.0, all = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const double d = defect[static_cast<Eigen::Index>(t)];
    all = std::max(all, d);
    for (int v : mesh.triangles()[t]) {
      if (on_contact[static_cast<std::size_t>(v)]) near = std::max(near, d);
    }
  }
  fmt::print("defect density: max {:.6g} J/m^3 overall, {:.6g} J/m^3 next to the contact boundary ({})\n", all, near,
             near < all ? "not localized there" : "peak at the contact boundary");
}

int cmd_run(const RunConfig& cfg) {
  require_mode(cfg, {RunMode::Slider, RunMode::Mesh2D}, "run");
  const fs::path dir = cfg.output.directory;
  write_provenance(dir, cfg);
  const ProblemSetup problem = make_problem(cfg);
  SimulationOptions opt;
  opt.snapshot_stride = cfg.output.snapshot_stride;
  opt.on_snapshot = [&](const FieldSnapshot& s) {
    write_field_snapshot(dir / "fields" / snapshot_name(s.k), problem.mesh, s.defect_density, s.z, s.k, s.t);
  };
  const RunArtifacts run = simulate(problem, cfg.material.chi, cfg.numerics.tau, opt);
  write_timeseries(dir / "timeseries.csv", run.ledger);
  summarize(run);
  if (cfg.geometry.layout == MeshLayout::Exp2D) report_localization(problem.mesh, run.ledger.defect_density());
  const double scale = std::max(run.ledger.energy_scale(), 1e-300);
  double top = 0.0;
  for (const auto& row : run.ledger.rows()) top = std::max(top, row.residual);
  if (top > cfg.numerics.energy_tol * scale) {
    fmt::print("note: max residual / energy scale = {:.3e} is positive beyond energy_tol = {:.3e}\n", top / scale,
               cfg.numerics.energy_tol);
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  require_mode(cfg, {RunMode::Sweep}, "sweep");
  const fs::path dir = cfg.output.directory;
  write_provenance(dir, cfg);
  const auto rows = sweep_grid(cfg.driver.sweep_chi, cfg.driver.sweep_tau, make_problem(cfg), cfg.driver.threads);
  write_sweep_table(dir / "sweep.csv", rows);
  int failed = 0;
  for (const auto& r : rows) {
    if (r.ok) {
      fmt::print("chi={:.6g} tau={:.6g} L1={:.6e} Linf={:.6e} steps={}\n", r.chi, r.tau, r.l1, r.linf, r.steps);
    } else {
      ++failed;
      fmt::print("chi={:.6g} tau={:.6g} FAILED: {}\n", r.chi, r.tau, r.error);
    }
  }
  return failed == 0 ? 0 : 3;
}

int cmd_adaptive(const RunConfig& cfg) {
  require_mode(cfg, {RunMode::Adaptive}, "adaptive");
  const fs::path dir = cfg.output.directory;
  write_provenance(dir, cfg);
  const ProblemSetup problem = make_problem(cfg);
  const AdaptiveResult res = run_adaptive(cfg.driver.adaptive, problem, [](const AdaptiveDecision& d) {
    fmt::print("adaptive chi={:.9g} tau={:.9g} steps={} l1={:.6e} gate={:.6e} decision={}\n", d.chi, d.tau,
               d.steps, d.l1, d.gate, d.accepted ? "accept" : "halve_tau");
    std::fflush(stdout);
  });
  write_adaptive_trace(dir / "adaptive_trace.csv", res.trace);
  fmt::print("gate_C = {:.9g}\n", res.gate_C);
  for (std::size_t i = 0; i < res.accepted.size(); ++i) {
    const RunArtifacts& run = res.accepted[i];
    const fs::path sub = dir / fmt::format("level_{:02d}", i);
    write_timeseries(sub / "timeseries.csv", run.ledger);
    write_field_snapshot(sub / "final_field.vtk", problem.mesh, run.ledger.defect_density(), run.final_state.z,
                         run.final_state.k, run.final_state.t);
    const Eigen::VectorXd& dd = run.ledger.defect_density();
    fmt::print("level {}: chi={:.9g} tau={:.9g} first rupture={:.9g} s, defect density in [{:.9g}, {:.9g}] J/m^3\n",
               i, run.chi, run.tau, run.first_rupture(), dd.size() ? dd.minCoeff() : 0.0,
               dd.size() ? dd.maxCoeff() : 0.0);
  }
  return 0;
}

int cmd_oracle(const RunConfig& cfg) {
  require_mode(cfg, {RunMode::Oracle}, "oracle");
  const fs::path dir = cfg.output.directory;
  write_provenance(dir, cfg);
  const SliderParams p = slider_params(cfg);
  const SliderCoefficients c = coefficients(p);
  const SliderDefectMeasure mu = defect_measure_slider(p);
  fmt::print("a0 = {:.12g} m/s, b_chi = {:.12g} m, t_chi = {:.12g} s\n", c.a0, c.b_chi, c.t_chi);
  fmt::print("rupture time = {:.12g} s (inviscid limit {:.12g} s)\n", rupture_time(p), rupture_time_limit(p));
  fmt::print("defect measure: Dirac at t = {:.12g} s, density {:.12g} J/m^3\n", mu.time, mu.magnitude);
  std::vector<double> times;
  const int n = step_count(cfg.loading.horizon, cfg.numerics.tau);
  for (int k = 0; k <= n; ++k) times.push_back(k == n ? cfg.loading.horizon : k * cfg.numerics.tau);
  write_oracle_history(dir / "oracle.csv", p, times);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasistatic adhesive delamination with Kelvin-Voigt viscosity"};
  app.set_version_flag("--version", std::string(version_string()));
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--override", overrides, "dotted.key=value, applied before validation");
    return sub;
  };
  CLI::App* run = add("run", "single simulation (mode slider or mesh2d)");
  CLI::App* sweep = add("sweep", "(chi, tau) residual study");
  CLI::App* adaptive = add("adaptive", "joint chi/tau refinement with the residual gate");
  CLI::App* oracle = add("oracle", "closed-form slider solution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = parse_config(config_path, overrides);
    if (run->parsed()) return cmd_run(cfg);
    if (sweep->parsed()) return cmd_sweep(cfg);
    if (adaptive->parsed()) return cmd_adaptive(cfg);
    if (oracle->parsed()) return cmd_oracle(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
