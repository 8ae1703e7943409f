#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "delam/mesh.hpp"
#include "delam/model.hpp"

namespace delam {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Partition of the DOFs into DIRICHLET-constrained and free sets.
struct DofMap {
  std::vector<int> dirichlet;    // sorted full DOF indices
  std::vector<int> free;         // sorted full DOF indices
  std::vector<int> free_index;   // full DOF -> position in `free`, or -1
  std::vector<int> dirichlet_index;  // full DOF -> position in `dirichlet`, or -1

  static DofMap build(const Mesh2D& mesh);
  std::size_t num_dofs() const { return free_index.size(); }
};

/// Plane linear CST stiffness (N/m per unit thickness). Throws MeshError
/// naming the triangle when an element is degenerate (area <= 1e-12 h^2).
SparseMatrix assemble_stiffness(const Mesh2D& mesh, const MaterialKV& material);

/// Boundary matrix of the bilinear form  int_{Gamma_C} z (k_n (u.n)(v.n) + k_t (u.t)(v.t)) dS,
/// integrated exactly per edge (linear shape functions, piecewise constant z).
SparseMatrix assemble_adhesive(const Mesh2D& mesh, const AdhesiveLaw& adhesive, const Eigen::VectorXd& z);

/// Constant strain (e_xx, e_yy, 2 e_xy) of triangle `tri` under u.
Eigen::Vector3d element_strain(const Mesh2D& mesh, const Eigen::VectorXd& u, std::size_t tri);

/// Consistent nodal loads of the uniform body force and the NEUMANN surface force.
Eigen::VectorXd assemble_load(const Mesh2D& mesh, const LoadProgram& load);

struct AssembledOperators {
  SparseMatrix stiffness;
  SparseMatrix adhesive;  // M_adh for the z passed to update_adhesive()
  Eigen::VectorXd load;
  DofMap dofs;

  void update_adhesive(const Mesh2D& mesh, const AdhesiveLaw& law, const Eigen::VectorXd& z) {
    adhesive = assemble_adhesive(mesh, law, z);
  }
};

AssembledOperators assemble_operators(const Mesh2D& mesh, const MaterialKV& material,
                                      const AdhesiveLaw& adhesive, const LoadProgram& load,
                                      const Eigen::VectorXd& z);

struct LinearSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// System of the u-step quadratic before any boundary condition:
///   matrix = (1 + chi/tau) K + M_adh,   rhs = b + (chi/tau) K u_prev.
/// Throws std::invalid_argument for tau <= 0 or chi < 0.
LinearSystem kv_full_system(const AssembledOperators& ops, const Eigen::VectorXd& u_prev, double tau, double chi);

/// Free-DOF system after eliminating the DIRICHLET rows and columns.
struct ReducedSystem {
  SparseMatrix matrix;       // free x free
  Eigen::VectorXd rhs;       // free
  Eigen::VectorXd prescribed;  // full-length vector holding the DIRICHLET values (zero elsewhere)
};

/// Full-length vector with w on every DIRICHLET node and zero elsewhere.
Eigen::VectorXd dirichlet_vector(const DofMap& dofs, const Vec2& w);

ReducedSystem eliminate_dirichlet(const LinearSystem& full, const DofMap& dofs, const Eigen::VectorXd& prescribed);

/// Kelvin-Voigt u-step system at t_k with DIRICHLET data w_D(t_k) eliminated.
ReducedSystem kv_substituted_system(const AssembledOperators& ops, const Eigen::VectorXd& u_prev, double tau,
                                    double chi, double t_k, const LoadProgram& load);

/// Scatters free-DOF values into a full vector that already carries the prescribed values.
Eigen::VectorXd expand_free(const DofMap& dofs, const Eigen::VectorXd& free_values, const Eigen::VectorXd& prescribed);
Eigen::VectorXd restrict_free(const DofMap& dofs, const Eigen::VectorXd& full);

/// Forces exerted by the supports on the body, nonzero only on DIRICHLET
/// DOFs: the residual (1 + chi/tau) K u - (chi/tau) K u_prev - b. Adhesive
/// terms never touch DIRICHLET DOFs since CONTACT and DIRICHLET are disjoint.
/// tau <= 0 evaluates the purely elastic residual K u - b.
Eigen::VectorXd reaction_forces(const AssembledOperators& ops, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& u_prev, double tau, double chi);

/// Sum of the nodal reactions (N per unit thickness).
Vec2 resultant(const Eigen::VectorXd& nodal_forces);

struct ContactTraction {
  double normal;      // z k_n * opening, positive in tension (Pa)
  double tangential;  // z k_t * (u . t)
};

/// Adhesive traction at the midpoint of each contact edge.
std::vector<ContactTraction> contact_tractions(const Mesh2D& mesh, const AdhesiveLaw& adhesive,
                                               const Eigen::VectorXd& u, const Eigen::VectorXd& z);

}  // namespace delam
