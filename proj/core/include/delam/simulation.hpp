#pragma once

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "delam/energetics.hpp"
#include "delam/mesh.hpp"
#include "delam/model.hpp"
#include "delam/qp.hpp"
#include "delam/stepper.hpp"

namespace delam {

/// Everything that defines a run except (chi, tau).
struct ProblemSetup {
  Mesh2D mesh;
  MaterialKV material;  // material.chi is ignored; simulate() takes chi explicitly
  AdhesiveLaw adhesive;
  LoadProgram load;
  QpOptions qp;
};

/// Slider on a single-cell (two-triangle) mesh: length L, height H, nu = 0.
ProblemSetup slider_problem(double young, double length, double height, double k_n, double k_t, double alpha,
                            double velocity, double horizon);

/// Field snapshot handed to SimulationOptions::on_snapshot.
struct FieldSnapshot {
  int k = 0;
  double t = 0.0;
  Eigen::VectorXd defect_density;
  Eigen::VectorXd z;
};

struct SimulationOptions {
  /// Called after every step with the prior state, the report and the ledger row.
  std::function<void(const SimState& prev, const StepReport& step, const LedgerRow& row)> on_step;
  /// Snapshot every `snapshot_stride` steps (0: only the final state).
  int snapshot_stride = 0;
  std::function<void(const FieldSnapshot&)> on_snapshot;
};

struct RunArtifacts {
  double chi = 0.0;
  double tau = 0.0;
  int steps = 0;
  EnergyLedger ledger;
  ResidualNorms norms;
  SimState final_state;
  /// Time of the step in which each contact edge debonded; NaN if it never did.
  std::vector<double> rupture_times;
  long qp_iterations = 0;
  int factorizations = 0;
  bool semistable = true;  // d <= alpha (1 + 1e-9) or z == 0 after every step

  /// Earliest rupture time over all edges, NaN if none.
  double first_rupture() const;
  /// Latest rupture time over all edges, NaN unless every edge debonded.
  double last_rupture() const;
};

/// Number of steps needed to reach the horizon with step tau; the last step
/// is shortened to land exactly on T.
int step_count(double horizon, double tau);

/// Runs the semi-implicit scheme from u = 0, z = 1 to the load horizon.
RunArtifacts simulate(const ProblemSetup& problem, double chi, double tau, const SimulationOptions& options = {});

}  // namespace delam
