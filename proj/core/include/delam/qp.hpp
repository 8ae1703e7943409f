#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "delam/elastostatics.hpp"
#include "delam/mesh.hpp"

namespace delam {

/// min 1/2 x'Hx + c'x   subject to   x_i >= 0 for i in bound_dofs.
struct QpProblem {
  SparseMatrix hessian;
  Eigen::VectorXd linear;
  std::vector<int> bound_dofs;  // sorted
  /// Maps QP coordinates back to free DOFs: u_free = rotation * x.
  SparseMatrix rotation;
  /// Identifies the Hessian for factorization reuse across solves; 0 disables caching.
  std::uint64_t hessian_version = 0;

  Eigen::VectorXd to_free(const Eigen::VectorXd& x) const { return rotation * x; }
  double objective(const Eigen::VectorXd& x) const { return 0.5 * x.dot(hessian * x) + linear.dot(x); }
};

/// Local (opening, tangential) frame at the contact nodes, expressed on the
/// free DOFs. At a contact node the first coordinate is the opening -u.n,
/// the second is u.t; all other free DOFs are untouched.
struct ContactFrame {
  SparseMatrix rotation;        // free -> free, orthogonal
  std::vector<int> bound_dofs;  // free-DOF positions of the opening coordinates
};

/// Throws MeshError when the edges meeting at a contact node disagree on the
/// normal (only flat contact boundaries are supported).
ContactFrame build_contact_frame(const Mesh2D& mesh, const DofMap& dofs);

/// Rotates the reduced u-step system into the contact frame so the
/// non-penetration constraint becomes simple lower bounds.
QpProblem rotate_contact_dofs(const Mesh2D& mesh, const DofMap& dofs, const ReducedSystem& system);
QpProblem rotate_contact_dofs(const ContactFrame& frame, const ReducedSystem& system);

struct QpOptions {
  /// Relative tolerance; thresholds scale with |x|_inf and |c|_inf.
  double tol = 1e-10;
  /// Cap on the number of active-set updates. A primal-dual iteration that
  /// moves any number of indices counts as one update, as does each add or
  /// drop of the primal fallback.
  int max_changes = 100;
};

struct KktDiagnostics {
  double stationarity = 0.0;      // |Hx + c - lambda|_inf
  double primal_violation = 0.0;  // max(0, -min x_B)
  double dual_violation = 0.0;    // max(0, -min lambda)
  double complementarity = 0.0;   // max |lambda_i x_i|
};

struct QpResult {
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;  // full length, nonzero only on active bounds
  std::vector<int> active;      // sorted subset of bound_dofs with x_i = 0 enforced
  int iterations = 0;
  int changes = 0;  // active-set updates
  KktDiagnostics kkt;
};

/// Primal-dual active-set solver for bound-constrained strictly convex QPs.
/// Falls back to a primal active-set method if the primal-dual iteration
/// revisits an active set. Holds the last factorization so repeated solves
/// with an unchanged Hessian and active set cost one back-substitution.
class QpSolver {
 public:
  QpSolver();
  ~QpSolver();
  QpSolver(QpSolver&&) noexcept;
  QpSolver& operator=(QpSolver&&) noexcept;

  /// `warm_active` seeds the active set. Throws NumericalError when the cap
  /// on active-set changes is exceeded or a subsystem is not positive definite.
  QpResult solve(const QpProblem& problem, const QpOptions& options = {},
                 const std::vector<int>& warm_active = {});

  int factorizations() const;

 private:
  struct Cache;
  std::unique_ptr<Cache> cache_;
};

QpResult solve_qp(const QpProblem& problem, const QpOptions& options = {},
                  const std::vector<int>& warm_active = {});

KktDiagnostics kkt_diagnostics(const QpProblem& problem, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& multipliers);

}  // namespace delam
