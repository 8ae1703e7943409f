#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "delam/elastostatics.hpp"
#include "delam/mesh.hpp"
#include "delam/model.hpp"
#include "delam/qp.hpp"

namespace delam {

struct StepReport {
  int k = 0;
  double t = 0.0;
  double tau = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd z;
  Eigen::VectorXd driving_energy;  // 1/2 K u.u per contact edge, J/m^2
  std::vector<int> ruptured;       // contact edges with z set to 0 in this step
  int qp_iterations = 0;
  int qp_changes = 0;
  KktDiagnostics kkt;
  /// Contact pressure (QP multiplier) per contact node, in mesh.contact_nodes() order.
  std::vector<double> contact_pressure;
  /// Opening -u.n per contact node, same order.
  std::vector<double> contact_opening;
};

struct ZStepResult {
  Eigen::VectorXd z;
  Eigen::VectorXd driving_energy;
  std::vector<int> ruptured;
};

/// Closed-form z-step: an edge debonds (z = 0) when 1/2 K u.u at its
/// midpoint exceeds alpha, otherwise it keeps z_prev. d == alpha keeps z_prev.
ZStepResult z_step(const Mesh2D& mesh, const Eigen::VectorXd& u_new, const Eigen::VectorXd& z_prev,
                   const AdhesiveLaw& adhesive);

/// Semi-implicit Kelvin-Voigt stepper.
///
/// Holds the assembled operators, the contact frame and a QP solver whose
/// factorization is reused while (tau, chi, z) stay unchanged. The active
/// set of the previous step seeds the next QP. The mesh, adhesive law and
/// load program are held by reference and must outlive the stepper.
class Stepper {
 public:
  Stepper(const Mesh2D& mesh, const MaterialKV& material, const AdhesiveLaw& adhesive,
          const LoadProgram& load, QpOptions qp = {});

  /// Minimizer of the u-step QP at t_new, with z frozen at state.z.
  Eigen::VectorXd u_step(const SimState& state, double tau, double chi, double t_new);

  /// u-step followed by z-step; advances t by tau. `t_new` overrides
  /// state.t + tau as the new time level (used to land on exact multiples).
  std::pair<SimState, StepReport> advance(const SimState& state, double tau, double chi,
                                          std::optional<double> t_new = std::nullopt);

  const Mesh2D& mesh() const { return *mesh_; }
  const AssembledOperators& operators() const { return ops_; }
  const ContactFrame& frame() const { return frame_; }
  const AdhesiveLaw& adhesive() const { return *adhesive_; }
  const LoadProgram& load() const { return *load_; }
  int factorizations() const { return solver_.factorizations(); }

  /// Data of the last QP solved by u_step.
  const QpProblem& last_problem() const { return qp_; }
  const QpResult& last_result() const { return result_; }

 private:
  void refresh_system(const Eigen::VectorXd& z, double tau, double chi);

  const Mesh2D* mesh_;
  const AdhesiveLaw* adhesive_;
  const LoadProgram* load_;
  QpOptions qp_options_;
  AssembledOperators ops_;
  ContactFrame frame_;
  std::vector<int> contact_nodes_;

  QpSolver solver_;
  QpProblem qp_;
  QpResult result_;
  SparseMatrix system_;  // (1 + chi/tau) K + M_adh(z), full size
  Eigen::VectorXd cached_z_;
  double cached_tau_ = -1.0;
  double cached_chi_ = -1.0;
  std::uint64_t version_ = 0;
  std::vector<int> warm_;
};

}  // namespace delam
