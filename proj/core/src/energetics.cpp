#include "delam/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace delam {

double elastic_energy(const SparseMatrix& stiffness, const Eigen::VectorXd& u) {
  return 0.5 * u.dot(stiffness * u);
}

double adhesive_energy(const Mesh2D& mesh, const AdhesiveLaw& adhesive, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& z) {
  double e = 0.0;
  for (std::size_t c = 0; c < mesh.num_contact_edges(); ++c) {
    const double zc = z[static_cast<Eigen::Index>(c)];
    if (zc == 0.0) continue;
    const auto& edge = mesh.contact_edge(c);
    const Vec2 ua = nodal(u, edge.nodes[0]);
    const Vec2 ub = nodal(u, edge.nodes[1]);
    const Vec2 n = mesh.contact_normal(c);
    const Vec2 t = mesh.contact_tangent(c);
    // int_0^1 f(s)^2 ds for linear f = (fa^2 + fa fb + fb^2) / 3
    const double na = ua.dot(n), nb = ub.dot(n);
    const double ta = ua.dot(t), tb = ub.dot(t);
    const double in = (na * na + na * nb + nb * nb) / 3.0;
    const double it = (ta * ta + ta * tb + tb * tb) / 3.0;
    e += 0.5 * zc * mesh.contact_edge_length(c) * (adhesive.k_n[c] * in + adhesive.k_t[c] * it);
  }
  return e;
}

double stored_energy(const Mesh2D& mesh, const AdhesiveLaw& adhesive, const SparseMatrix& stiffness,
                     const Eigen::VectorXd& u, const Eigen::VectorXd& z) {
  return elastic_energy(stiffness, u) + adhesive_energy(mesh, adhesive, u, z);
}

Eigen::VectorXd viscous_rate_field(const Mesh2D& mesh, const MaterialKV& material, const Eigen::VectorXd& u_new,
                                   const Eigen::VectorXd& u_prev, double tau, double chi) {
  if (!(tau > 0.0)) throw std::invalid_argument("time step tau must be > 0");
  Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_triangles()));
  if (chi == 0.0) return r;
  const Eigen::Matrix3d d = material.elasticity_matrix();
  const Eigen::VectorXd v = (u_new - u_prev) / tau;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::Vector3d e = element_strain(mesh, v, t);
    r[static_cast<Eigen::Index>(t)] = chi * e.dot(d * e);
  }
  return r;
}

double adhesive_dissipation(const Mesh2D& mesh, const AdhesiveLaw& adhesive, const Eigen::VectorXd& z0,
                            const Eigen::VectorXd& z) {
  double s = 0.0;
  for (std::size_t c = 0; c < mesh.num_contact_edges(); ++c) {
    const auto i = static_cast<Eigen::Index>(c);
    s += adhesive.alpha[c] * mesh.contact_edge_length(c) * (z0[i] - z[i]);
  }
  return s;
}

double external_work_increment(const Eigen::VectorXd& reactions_k, const Eigen::VectorXd& reactions_km1,
                               const Eigen::VectorXd& load, const Eigen::VectorXd& du) {
  return 0.5 * (reactions_k + reactions_km1).dot(du) + load.dot(du);
}

EnergyLedger::EnergyLedger(const Mesh2D& mesh, const MaterialKV& material, const AdhesiveLaw& adhesive,
                           const AssembledOperators& ops, const SimState& initial)
    : mesh_(&mesh), material_(&material), adhesive_(&adhesive), ops_(&ops), z0_(initial.z) {
  const auto nt = static_cast<Eigen::Index>(mesh.num_triangles());
  defect_ = Eigen::VectorXd::Zero(nt);
  areas_.resize(nt);
  for (Eigen::Index t = 0; t < nt; ++t) areas_[t] = mesh.signed_area(static_cast<std::size_t>(t));
  contact_length_ = mesh.total_contact_length();
  reaction_prev_ = reaction_forces(ops, initial.u, initial.u, 0.0, 0.0);

  LedgerRow row;
  row.k = initial.k;
  row.t = initial.t;
  row.stored = stored_energy(mesh, adhesive, ops.stiffness, initial.u, initial.z);
  row.reaction = resultant(reaction_prev_);
  double bonded = 0.0;
  for (std::size_t c = 0; c < mesh.num_contact_edges(); ++c) {
    bonded += mesh.contact_edge_length(c) * initial.z[static_cast<Eigen::Index>(c)];
  }
  row.bonded_fraction = contact_length_ > 0.0 ? bonded / contact_length_ : 0.0;
  scale_ = std::abs(row.stored);
  rows_.push_back(row);
}

void EnergyLedger::record(const SimState& prev, const StepReport& step, double chi) {
  if (!mesh_) throw std::logic_error("EnergyLedger::record on an unbound ledger");
  const LedgerRow& last = rows_.back();
  const Eigen::VectorXd du = step.u - prev.u;

  const Eigen::VectorXd reaction = reaction_forces(*ops_, step.u, prev.u, step.tau, chi);
  const Eigen::VectorXd rate = viscous_rate_field(*mesh_, *material_, step.u, prev.u, step.tau, chi);
  defect_ += step.tau * rate;
  const double visc_inc = step.tau * areas_.dot(rate);
  const double work_inc = external_work_increment(reaction, reaction_prev_, ops_->load, du);

  LedgerRow row;
  row.k = step.k;
  row.t = step.t;
  row.tau = step.tau;
  row.stored = stored_energy(*mesh_, *adhesive_, ops_->stiffness, step.u, step.z);
  row.viscous_cum = last.viscous_cum + visc_inc;
  row.adhesive_cum = adhesive_dissipation(*mesh_, *adhesive_, z0_, step.z);
  row.work_cum = last.work_cum + work_inc;
  const double inc = (row.stored - last.stored) + visc_inc + (row.adhesive_cum - last.adhesive_cum) - work_inc;
  row.residual = last.residual + inc;
  row.reaction = resultant(reaction);
  double bonded = 0.0;
  for (std::size_t c = 0; c < mesh_->num_contact_edges(); ++c) {
    bonded += mesh_->contact_edge_length(c) * step.z[static_cast<Eigen::Index>(c)];
  }
  row.bonded_fraction = contact_length_ > 0.0 ? bonded / contact_length_ : 0.0;

  scale_ = std::max({scale_, std::abs(row.stored), std::abs(row.work_cum), row.viscous_cum, row.adhesive_cum});
  step_defects_.push_back(inc);
  reaction_prev_ = reaction;
  rows_.push_back(row);
}

double residual(const EnergyLedger& ledger, std::size_t k) {
  const auto& rows = ledger.rows();
  if (k >= rows.size()) throw std::out_of_range("residual: step index beyond ledger");
  const LedgerRow& r = rows[k];
  return r.stored - rows.front().stored + r.viscous_cum + r.adhesive_cum - r.work_cum;
}

ResidualNorms residual_norms(const EnergyLedger& ledger) { return residual_norms(ledger.rows()); }

ResidualNorms residual_norms(const std::vector<LedgerRow>& rows) {
  ResidualNorms n;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double e = std::abs(rows[k].residual);
    n.l1 += e * rows[k].tau;
    n.linf = std::max(n.linf, e);
  }
  return n;
}

const Eigen::VectorXd& defect_cumulative(const EnergyLedger& ledger) { return ledger.defect_density(); }

}  // namespace delam
