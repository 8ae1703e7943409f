#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "delam/mesh.hpp"

namespace delam {

/// Isotropic Kelvin-Voigt material: elastic moduli from (E, nu), viscous
/// moduli chi * C. Energies are per unit out-of-plane thickness.
struct MaterialKV {
  double young = 0.0;    // Pa
  double poisson = 0.0;  // [0, 0.5)
  double chi = 0.0;      // relaxation time, s
  bool plane_stress = false;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;

  /// 3x3 Voigt matrix acting on (e_xx, e_yy, 2 e_xy).
  Eigen::Matrix3d elasticity_matrix() const;

  bool operator==(const MaterialKV&) const = default;
};

/// Adhesive layer data per contact edge: stiffness diag(k_n, k_t) in Pa/m
/// and fracture toughness alpha in J/m^2.
struct AdhesiveLaw {
  std::vector<double> k_n;
  std::vector<double> k_t;
  std::vector<double> alpha;

  static AdhesiveLaw uniform(std::size_t n_edges, double k_n, double k_t, double alpha);

  std::size_t size() const { return alpha.size(); }
  void validate(std::size_t n_contact_edges) const;

  bool operator==(const AdhesiveLaw&) const = default;
};

/// Loading program: w_D(t) = v_D t on DIRICHLET nodes, constant uniform body
/// force f (N/m^3) and surface force g (N/m^2) on NEUMANN edges.
struct LoadProgram {
  Vec2 dirichlet_velocity = Vec2::Zero();
  Vec2 body_force = Vec2::Zero();
  Vec2 surface_force = Vec2::Zero();
  double horizon = 0.0;

  Vec2 dirichlet_displacement(double t) const { return dirichlet_velocity * t; }
  void validate() const;

  bool operator==(const LoadProgram&) const = default;
};

/// Evolving state: nodal displacements (2 per node, x then y) and one
/// delamination value per contact edge.
struct SimState {
  int k = 0;
  double t = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd z;
  Eigen::VectorXd u_prev;

  /// u = 0, z = 1 everywhere, t = 0.
  static SimState initial(const Mesh2D& mesh);
};

/// Opening of the interface at a point: -u . n with n the outward normal.
/// Non-penetration of the rigid obstacle is opening >= 0.
inline double opening(const Vec2& u, const Vec2& outward_normal) { return -u.dot(outward_normal); }

/// Displacement of node i.
inline Vec2 nodal(const Eigen::VectorXd& u, int node) { return {u[2 * node], u[2 * node + 1]}; }

/// Average of the displacements of the two end nodes of contact edge c.
Vec2 contact_midpoint_displacement(const Mesh2D& mesh, const Eigen::VectorXd& u, std::size_t c);

/// 1/2 K u.u at the midpoint of each contact edge, in J/m^2.
Eigen::VectorXd driving_energy(const Mesh2D& mesh, const AdhesiveLaw& adhesive, const Eigen::VectorXd& u);

/// Checks admissibility and semistability of an initial state. Returns one
/// human-readable message per violation; empty means valid.
std::vector<std::string> validate_initial_state(const SimState& state, const Mesh2D& mesh,
                                                const AdhesiveLaw& adhesive);

}  // namespace delam
