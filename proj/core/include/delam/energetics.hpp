#pragma once

#include <vector>

#include <Eigen/Core>

#include "delam/elastostatics.hpp"
#include "delam/mesh.hpp"
#include "delam/model.hpp"
#include "delam/stepper.hpp"

namespace delam {

/// 1/2 u'Ku, J per unit thickness.
double elastic_energy(const SparseMatrix& stiffness, const Eigen::VectorXd& u);

/// 1/2 int_{Gamma_C} z K u.u dS, integrated exactly per edge.
double adhesive_energy(const Mesh2D& mesh, const AdhesiveLaw& adhesive, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& z);

/// Elastic plus adhesive stored energy. The load potential is accounted for
/// as external work instead.
double stored_energy(const Mesh2D& mesh, const AdhesiveLaw& adhesive, const SparseMatrix& stiffness,
                     const Eigen::VectorXd& u, const Eigen::VectorXd& z);

/// Per-triangle viscous dissipation rate chi C e(v):e(v) with v = (u_new - u_prev)/tau,
/// in J/(m^3 s). Zero when chi == 0.
Eigen::VectorXd viscous_rate_field(const Mesh2D& mesh, const MaterialKV& material, const Eigen::VectorXd& u_new,
                                   const Eigen::VectorXd& u_prev, double tau, double chi);

/// alpha * sum_e |e| (z0_e - z_e).
double adhesive_dissipation(const Mesh2D& mesh, const AdhesiveLaw& adhesive, const Eigen::VectorXd& z0,
                            const Eigen::VectorXd& z);

/// Trapezoidal support work 1/2 (R_k + R_{k-1}).du plus load work b.du.
/// Reactions vanish off the DIRICHLET DOFs, so only du there contributes to the first term.
double external_work_increment(const Eigen::VectorXd& reactions_k, const Eigen::VectorXd& reactions_km1,
                               const Eigen::VectorXd& load, const Eigen::VectorXd& du);

struct LedgerRow {
  int k = 0;
  double t = 0.0;
  double tau = 0.0;
  double stored = 0.0;
  double viscous_cum = 0.0;
  double adhesive_cum = 0.0;
  double work_cum = 0.0;
  double residual = 0.0;  // maintained from per-step increments
  Vec2 reaction = Vec2::Zero();
  double bonded_fraction = 1.0;  // length-weighted mean of z on Gamma_C
};

struct ResidualNorms {
  double l1 = 0.0;    // sum_k |E_k| tau_k, J s
  double linf = 0.0;  // max_k |E_k|, J
};

/// Energy bookkeeping of one run. Row 0 is the initial state.
class EnergyLedger {
 public:
  EnergyLedger() = default;
  EnergyLedger(const Mesh2D& mesh, const MaterialKV& material, const AdhesiveLaw& adhesive,
               const AssembledOperators& ops, const SimState& initial);

  /// Books step k. `prev` is the state before the step.
  void record(const SimState& prev, const StepReport& step, double chi);
  /// Drops the references to the model so the ledger can outlive it; record() then throws.
  void seal() { mesh_ = nullptr; material_ = nullptr; adhesive_ = nullptr; ops_ = nullptr; }

  const std::vector<LedgerRow>& rows() const { return rows_; }
  const LedgerRow& back() const { return rows_.back(); }
  std::size_t steps() const { return rows_.empty() ? 0 : rows_.size() - 1; }

  /// Per-triangle cumulative viscous dissipation, J/m^3.
  const Eigen::VectorXd& defect_density() const { return defect_; }
  /// Largest |energy| seen, used to scale tolerances.
  double energy_scale() const { return scale_; }
  /// Per-step energy defect E_k - E_{k-1}.
  const std::vector<double>& step_defects() const { return step_defects_; }

 private:
  const Mesh2D* mesh_ = nullptr;
  const MaterialKV* material_ = nullptr;
  const AdhesiveLaw* adhesive_ = nullptr;
  const AssembledOperators* ops_ = nullptr;
  Eigen::VectorXd z0_;
  Eigen::VectorXd reaction_prev_;
  Eigen::VectorXd defect_;
  Eigen::VectorXd areas_;
  double contact_length_ = 0.0;
  double scale_ = 0.0;
  std::vector<LedgerRow> rows_;
  std::vector<double> step_defects_;
};

/// E_k = stored_k - stored_0 + viscous_cum_k + adhesive_cum_k - work_cum_k, from the row totals.
double residual(const EnergyLedger& ledger, std::size_t k);

/// L1 as the step-function integral over rows k >= 1 (row 0 is the initial state), Linf as the max.
ResidualNorms residual_norms(const EnergyLedger& ledger);
ResidualNorms residual_norms(const std::vector<LedgerRow>& rows);

/// Cumulative defect density after the last recorded step, J/m^3 per triangle.
const Eigen::VectorXd& defect_cumulative(const EnergyLedger& ledger);

}  // namespace delam
