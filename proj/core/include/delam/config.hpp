#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "delam/driver.hpp"
#include "delam/mesh.hpp"
#include "delam/model.hpp"
#include "delam/simulation.hpp"
#include "delam/slider_oracle.hpp"

namespace delam {

enum class RunMode { Slider, Mesh2D, Sweep, Adaptive, Oracle };

std::string_view to_string(RunMode mode);
RunMode parse_run_mode(std::string_view name);

struct GeometryConfig {
  MeshLayout layout = MeshLayout::Slider;
  double length = 0.0;
  double height = 0.0;
  double contact_length = 0.0;  // SLIDER: defaults to height
  int nx = 1;
  int ny = 1;

  bool operator==(const GeometryConfig&) const = default;
};

struct AdhesiveConfig {
  double k_n = 0.0;
  double k_t = 0.0;
  double alpha = 0.0;

  bool operator==(const AdhesiveConfig&) const = default;
};

struct NumericsConfig {
  double tau = 0.0;
  double qp_tol = 1e-10;
  int qp_max_changes = 100;
  /// The CLI reports residuals above energy_tol times the energy scale.
  double energy_tol = 1e-8;

  bool operator==(const NumericsConfig&) const = default;
};

struct DriverBlock {
  DriverConfig adaptive;
  std::vector<double> sweep_chi;
  std::vector<double> sweep_tau;
  unsigned threads = 0;

  bool operator==(const DriverBlock&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  int snapshot_stride = 0;  // 0: final snapshot only

  bool operator==(const OutputConfig&) const = default;
};

/// Schema (YAML syntax, nested blocks):
///
///     mode: slider | mesh2d | sweep | adaptive | oracle
///     geometry: {layout: slider | exp2d, length, height, contact_length, nx, ny}
///     material: {young, poisson, chi, plane_stress}
///     adhesive: {k_n, k_t, alpha}
///     loading:  {v_D: [vx, vy], T, body_force: [fx, fy], surface_force: [gx, gy]}
///     numerics: {tau, qp_tol, qp_max_changes, energy_tol}
///     driver:   {chi0, tau0, chi_final, gate_C, gamma, max_tau_halvings,
///                sweep_chi: [...], sweep_tau: [...], threads}
///     output:   {directory, snapshot_stride}
///
/// Always required: mode, geometry.{layout, length, height, nx, ny},
/// material.{young, poisson}, adhesive.{k_n, k_t, alpha}, loading.{v_D, T}.
/// Required by mode: material.chi and numerics.tau for slider, mesh2d and
/// oracle; driver.{chi0, tau0, chi_final} for adaptive; driver.{sweep_chi,
/// sweep_tau} for sweep; geometry.contact_length for the exp2d layout.
struct RunConfig {
  RunMode mode = RunMode::Slider;
  GeometryConfig geometry;
  MaterialKV material;
  AdhesiveConfig adhesive;
  LoadProgram loading;
  NumericsConfig numerics;
  DriverBlock driver;
  OutputConfig output;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a configuration. Each override is `dotted.key=value`
/// with a YAML value, applied before validation. Throws ConfigError listing
/// every problem found, each prefixed with its file location.
RunConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
RunConfig parse_config_string(std::string_view text, const std::string& source = "<string>",
                              const std::vector<std::string>& overrides = {});

/// YAML text that parses back to an equal RunConfig.
std::string emit_config(const RunConfig& cfg);

/// Mesh, material, adhesive and loading of the configured problem.
ProblemSetup make_problem(const RunConfig& cfg);

/// Slider oracle parameters: E, L = geometry.length, K = adhesive.k_n, alpha, |v_D|, chi.
SliderParams slider_params(const RunConfig& cfg);

std::string_view version_string();

}  // namespace delam
