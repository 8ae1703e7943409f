#include "delam/model.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace delam {

void MaterialKV::validate() const {
  if (!(young > 0.0)) throw std::invalid_argument("material: Young modulus must be > 0");
  if (!(poisson >= 0.0 && poisson < 0.5)) throw std::invalid_argument("material: Poisson ratio must lie in [0, 0.5)");
  if (!(chi >= 0.0)) throw std::invalid_argument("material: relaxation time chi must be >= 0");
}

Eigen::Matrix3d MaterialKV::elasticity_matrix() const {
  Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
  const double nu = poisson;
  if (plane_stress) {
    const double f = young / (1.0 - nu * nu);
    d << f, f * nu, 0.0,
         f * nu, f, 0.0,
         0.0, 0.0, f * 0.5 * (1.0 - nu);
  } else {
    const double lambda = nu * young / ((1.0 + nu) * (1.0 - 2.0 * nu));
    const double mu = young / (2.0 + 2.0 * nu);
    d << lambda + 2.0 * mu, lambda, 0.0,
         lambda, lambda + 2.0 * mu, 0.0,
         0.0, 0.0, mu;
  }
  return d;
}

AdhesiveLaw AdhesiveLaw::uniform(std::size_t n_edges, double k_n, double k_t, double alpha) {
  return {std::vector<double>(n_edges, k_n), std::vector<double>(n_edges, k_t),
          std::vector<double>(n_edges, alpha)};
}

void AdhesiveLaw::validate(std::size_t n_contact_edges) const {
  if (k_n.size() != n_contact_edges || k_t.size() != n_contact_edges || alpha.size() != n_contact_edges) {
    throw std::invalid_argument(fmt::format("adhesive: data for {} edges given, mesh has {} contact edges",
                                            alpha.size(), n_contact_edges));
  }
  for (std::size_t c = 0; c < n_contact_edges; ++c) {
    if (!(k_n[c] > 0.0 && k_t[c] > 0.0 && alpha[c] > 0.0)) {
      throw std::invalid_argument(fmt::format("adhesive: k_n, k_t, alpha must be > 0 (edge {})", c));
    }
  }
}

void LoadProgram::validate() const {
  if (!(horizon >= 0.0)) throw std::invalid_argument("loading: horizon T must be >= 0");
}

SimState SimState::initial(const Mesh2D& mesh) {
  SimState s;
  s.u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_dofs()));
  s.u_prev = s.u;
  s.z = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(mesh.num_contact_edges()));
  return s;
}

Vec2 contact_midpoint_displacement(const Mesh2D& mesh, const Eigen::VectorXd& u, std::size_t c) {
  const auto& e = mesh.contact_edge(c);
  return 0.5 * (nodal(u, e.nodes[0]) + nodal(u, e.nodes[1]));
}

Eigen::VectorXd driving_energy(const Mesh2D& mesh, const AdhesiveLaw& adhesive, const Eigen::VectorXd& u) {
  const auto nc = mesh.num_contact_edges();
  Eigen::VectorXd d(static_cast<Eigen::Index>(nc));
  for (std::size_t c = 0; c < nc; ++c) {
    const Vec2 um = contact_midpoint_displacement(mesh, u, c);
    const double un = um.dot(mesh.contact_normal(c));
    const double ut = um.dot(mesh.contact_tangent(c));
    d[static_cast<Eigen::Index>(c)] = 0.5 * (adhesive.k_n[c] * un * un + adhesive.k_t[c] * ut * ut);
  }
  return d;
}

std::vector<std::string> validate_initial_state(const SimState& state, const Mesh2D& mesh,
                                                const AdhesiveLaw& adhesive) {
  std::vector<std::string> issues;
  if (state.u.size() != static_cast<Eigen::Index>(mesh.num_dofs())) {
    issues.push_back(fmt::format("u has {} entries, mesh has {} DOFs", state.u.size(), mesh.num_dofs()));
    return issues;
  }
  if (state.z.size() != static_cast<Eigen::Index>(mesh.num_contact_edges())) {
    issues.push_back(fmt::format("z has {} entries, mesh has {} contact edges", state.z.size(),
                                 mesh.num_contact_edges()));
    return issues;
  }
  if (state.t != 0.0) issues.push_back(fmt::format("initial time is {}, expected 0", state.t));

  for (std::size_t c = 0; c < mesh.num_contact_edges(); ++c) {
    const auto& e = mesh.contact_edge(c);
    for (int v : e.nodes) {
      const double g = opening(nodal(state.u, v), mesh.contact_normal(c));
      if (g < 0.0) issues.push_back(fmt::format("contact node {} penetrates the obstacle (opening {})", v, g));
    }
  }
  const Eigen::VectorXd d = driving_energy(mesh, adhesive, state.u);
  for (Eigen::Index c = 0; c < state.z.size(); ++c) {
    const double z = state.z[c];
    if (!(z >= 0.0 && z <= 1.0)) issues.push_back(fmt::format("z[{}] = {} outside [0, 1]", c, z));
    if (z != 0.0 && d[c] > adhesive.alpha[static_cast<std::size_t>(c)]) {
      issues.push_back(fmt::format("edge {} not semistable: K u.u = {} > 2 alpha = {} with z = {}", c,
                                   2.0 * d[c], 2.0 * adhesive.alpha[static_cast<std::size_t>(c)], z));
    }
  }
  return issues;
}

}  // namespace delam
