#include "delam/stepper.hpp"

#include <stdexcept>

namespace delam {

ZStepResult z_step(const Mesh2D& mesh, const Eigen::VectorXd& u_new, const Eigen::VectorXd& z_prev,
                   const AdhesiveLaw& adhesive) {
  ZStepResult r;
  r.driving_energy = driving_energy(mesh, adhesive, u_new);
  r.z = z_prev;
  for (Eigen::Index c = 0; c < z_prev.size(); ++c) {
    if (r.driving_energy[c] > adhesive.alpha[static_cast<std::size_t>(c)]) {
      if (z_prev[c] > 0.0) r.ruptured.push_back(static_cast<int>(c));
      r.z[c] = 0.0;
    }
  }
  return r;
}

Stepper::Stepper(const Mesh2D& mesh, const MaterialKV& material, const AdhesiveLaw& adhesive,
                 const LoadProgram& load, QpOptions qp)
    : mesh_(&mesh), adhesive_(&adhesive), load_(&load), qp_options_(qp) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(mesh.num_contact_edges()));
  ops_ = assemble_operators(mesh, material, adhesive, load, ones);
  frame_ = build_contact_frame(mesh, ops_.dofs);
  contact_nodes_ = mesh.contact_nodes();
  qp_.rotation = frame_.rotation;
  qp_.bound_dofs = frame_.bound_dofs;
}

void Stepper::refresh_system(const Eigen::VectorXd& z, double tau, double chi) {
  if (tau == cached_tau_ && chi == cached_chi_ && z.size() == cached_z_.size() && z == cached_z_) return;
  if (!(tau > 0.0)) throw std::invalid_argument("time step tau must be > 0");
  if (!(chi >= 0.0)) throw std::invalid_argument("relaxation time chi must be >= 0");
  if (z.size() != cached_z_.size() || z != cached_z_) ops_.update_adhesive(*mesh_, *adhesive_, z);
  system_ = (1.0 + chi / tau) * ops_.stiffness + ops_.adhesive;
  const LinearSystem full{system_, Eigen::VectorXd::Zero(system_.rows())};
  const ReducedSystem red = eliminate_dirichlet(full, ops_.dofs, full.rhs);
  const SparseMatrix rt = frame_.rotation.transpose();
  qp_.hessian = rt * red.matrix * frame_.rotation;
  qp_.hessian_version = ++version_;
  cached_z_ = z;
  cached_tau_ = tau;
  cached_chi_ = chi;
}

Eigen::VectorXd Stepper::u_step(const SimState& state, double tau, double chi, double t_new) {
  refresh_system(state.z, tau, chi);
  const Eigen::VectorXd prescribed = dirichlet_vector(ops_.dofs, load_->dirichlet_displacement(t_new));
  Eigen::VectorXd rhs = ops_.load - system_ * prescribed;
  if (chi != 0.0) rhs += (chi / tau) * (ops_.stiffness * state.u);
  qp_.linear = -(frame_.rotation.transpose() * restrict_free(ops_.dofs, rhs));
  result_ = solver_.solve(qp_, qp_options_, warm_);
  warm_ = result_.active;
  return expand_free(ops_.dofs, frame_.rotation * result_.x, prescribed);
}

std::pair<SimState, StepReport> Stepper::advance(const SimState& state, double tau, double chi,
                                                 std::optional<double> t_level) {
  const double t_new = t_level ? *t_level : state.t + tau;
  SimState next;
  next.k = state.k + 1;
  next.t = t_new;
  next.u = u_step(state, tau, chi, t_new);
  next.u_prev = state.u;
  ZStepResult zr = z_step(*mesh_, next.u, state.z, *adhesive_);
  next.z = zr.z;

  StepReport rep;
  rep.k = next.k;
  rep.t = t_new;
  rep.tau = tau;
  rep.u = next.u;
  rep.z = next.z;
  rep.driving_energy = std::move(zr.driving_energy);
  rep.ruptured = std::move(zr.ruptured);
  rep.qp_iterations = result_.iterations;
  rep.qp_changes = result_.changes;
  rep.kkt = result_.kkt;
  rep.contact_pressure.reserve(contact_nodes_.size());
  rep.contact_opening.reserve(contact_nodes_.size());
  for (int v : contact_nodes_) {
    const int b = ops_.dofs.free_index[2 * static_cast<std::size_t>(v)];
    rep.contact_pressure.push_back(result_.multipliers[b]);
    rep.contact_opening.push_back(result_.x[b]);
  }
  return {std::move(next), std::move(rep)};
}

}  // namespace delam
