#include "delam/elastostatics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "delam/error.hpp"

namespace delam {

using Triplet = Eigen::Triplet<double>;

DofMap DofMap::build(const Mesh2D& mesh) {
  DofMap map;
  const auto n = mesh.num_dofs();
  map.free_index.assign(n, -1);
  map.dirichlet_index.assign(n, -1);
  std::vector<bool> constrained(n, false);
  for (int v : mesh.dirichlet_nodes()) {
    constrained[2 * v] = true;
    constrained[2 * v + 1] = true;
  }
  for (std::size_t d = 0; d < n; ++d) {
    if (constrained[d]) {
      map.dirichlet_index[d] = static_cast<int>(map.dirichlet.size());
      map.dirichlet.push_back(static_cast<int>(d));
    } else {
      map.free_index[d] = static_cast<int>(map.free.size());
      map.free.push_back(static_cast<int>(d));
    }
  }
  return map;
}

namespace {

// Strain-displacement matrix of a constant-strain triangle, rows (e_xx, e_yy, 2 e_xy).
Eigen::Matrix<double, 3, 6> cst_b_matrix(const Vec2& p0, const Vec2& p1, const Vec2& p2, double area) {
  const double b[3] = {p1.y() - p2.y(), p2.y() - p0.y(), p0.y() - p1.y()};
  const double c[3] = {p2.x() - p1.x(), p0.x() - p2.x(), p1.x() - p0.x()};
  Eigen::Matrix<double, 3, 6> bm = Eigen::Matrix<double, 3, 6>::Zero();
  const double inv = 1.0 / (2.0 * area);
  for (int i = 0; i < 3; ++i) {
    bm(0, 2 * i) = b[i] * inv;
    bm(1, 2 * i + 1) = c[i] * inv;
    bm(2, 2 * i) = c[i] * inv;
    bm(2, 2 * i + 1) = b[i] * inv;
  }
  return bm;
}

}  // namespace

SparseMatrix assemble_stiffness(const Mesh2D& mesh, const MaterialKV& material) {
  material.validate();
  const Eigen::Matrix3d d = material.elasticity_matrix();
  std::vector<Triplet> trips;
  trips.reserve(mesh.num_triangles() * 36);
  const auto& nodes = mesh.nodes();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Vec2 &p0 = nodes[tri[0]], &p1 = nodes[tri[1]], &p2 = nodes[tri[2]];
    const double h = std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
    const double area = mesh.signed_area(t);
    if (area <= 1e-12 * h * h) {
      throw MeshError(fmt::format("degenerate triangle {} (area {:.3e}, longest edge {:.3e})", t, area, h));
    }
    const auto bm = cst_b_matrix(p0, p1, p2, area);
    const Eigen::Matrix<double, 6, 6> ke = area * bm.transpose() * d * bm;
    for (int i = 0; i < 6; ++i) {
      const int gi = 2 * tri[i / 2] + i % 2;
      for (int j = 0; j < 6; ++j) {
        trips.emplace_back(gi, 2 * tri[j / 2] + j % 2, ke(i, j));
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(mesh.num_dofs());
  SparseMatrix k(n, n);
  k.setFromTriplets(trips.begin(), trips.end());
  return k;
}

Eigen::Vector3d element_strain(const Mesh2D& mesh, const Eigen::VectorXd& u, std::size_t tri) {
  const auto& t = mesh.triangles()[tri];
  const auto& nodes = mesh.nodes();
  const auto bm = cst_b_matrix(nodes[t[0]], nodes[t[1]], nodes[t[2]], mesh.signed_area(tri));
  Eigen::Matrix<double, 6, 1> ue;
  for (int i = 0; i < 3; ++i) {
    ue[2 * i] = u[2 * t[i]];
    ue[2 * i + 1] = u[2 * t[i] + 1];
  }
  return bm * ue;
}

SparseMatrix assemble_adhesive(const Mesh2D& mesh, const AdhesiveLaw& adhesive, const Eigen::VectorXd& z) {
  const auto nc = mesh.num_contact_edges();
  if (static_cast<std::size_t>(z.size()) != nc) {
    throw std::invalid_argument(fmt::format("adhesive assembly: z has {} entries for {} contact edges", z.size(), nc));
  }
  std::vector<Triplet> trips;
  trips.reserve(nc * 16);
  for (std::size_t c = 0; c < nc; ++c) {
    const double zc = z[static_cast<Eigen::Index>(c)];
    if (zc == 0.0) continue;
    const Vec2 n = mesh.contact_normal(c);
    const Vec2 t = mesh.contact_tangent(c);
    const Eigen::Matrix2d kl = adhesive.k_n[c] * n * n.transpose() + adhesive.k_t[c] * t * t.transpose();
    const double le = mesh.contact_edge_length(c);
    const auto& e = mesh.contact_edge(c);
    // int N_a N_b dS = le/6 * [2 1; 1 2]
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const double w = zc * le / 6.0 * (a == b ? 2.0 : 1.0);
        for (int i = 0; i < 2; ++i) {
          for (int j = 0; j < 2; ++j) {
            trips.emplace_back(2 * e.nodes[a] + i, 2 * e.nodes[b] + j, w * kl(i, j));
          }
        }
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(mesh.num_dofs());
  SparseMatrix m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

Eigen::VectorXd assemble_load(const Mesh2D& mesh, const LoadProgram& load) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_dofs()));
  if (!load.body_force.isZero(0.0)) {
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
      const double share = mesh.signed_area(t) / 3.0;
      for (int v : mesh.triangles()[t]) {
        b[2 * v] += share * load.body_force.x();
        b[2 * v + 1] += share * load.body_force.y();
      }
    }
  }
  if (!load.surface_force.isZero(0.0)) {
    for (const auto& e : mesh.edges()) {
      if (e.tag != BoundaryTag::Neumann) continue;
      const double share = 0.5 * (mesh.nodes()[e.nodes[1]] - mesh.nodes()[e.nodes[0]]).norm();
      for (int v : e.nodes) {
        b[2 * v] += share * load.surface_force.x();
        b[2 * v + 1] += share * load.surface_force.y();
      }
    }
  }
  return b;
}

AssembledOperators assemble_operators(const Mesh2D& mesh, const MaterialKV& material,
                                      const AdhesiveLaw& adhesive, const LoadProgram& load,
                                      const Eigen::VectorXd& z) {
  adhesive.validate(mesh.num_contact_edges());
  AssembledOperators ops;
  ops.stiffness = assemble_stiffness(mesh, material);
  ops.adhesive = assemble_adhesive(mesh, adhesive, z);
  ops.load = assemble_load(mesh, load);
  ops.dofs = DofMap::build(mesh);
  return ops;
}

LinearSystem kv_full_system(const AssembledOperators& ops, const Eigen::VectorXd& u_prev, double tau, double chi) {
  if (!(tau > 0.0)) throw std::invalid_argument("time step tau must be > 0");
  if (!(chi >= 0.0)) throw std::invalid_argument("relaxation time chi must be >= 0");
  const double ratio = chi / tau;
  LinearSystem sys;
  sys.matrix = (1.0 + ratio) * ops.stiffness + ops.adhesive;
  sys.rhs = ops.load;
  if (ratio != 0.0) sys.rhs += ratio * (ops.stiffness * u_prev);
  return sys;
}

Eigen::VectorXd dirichlet_vector(const DofMap& dofs, const Vec2& w) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dofs.num_dofs()));
  for (int d : dofs.dirichlet) v[d] = w[d % 2];
  return v;
}

ReducedSystem eliminate_dirichlet(const LinearSystem& full, const DofMap& dofs, const Eigen::VectorXd& prescribed) {
  const auto nf = static_cast<Eigen::Index>(dofs.free.size());
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(full.matrix.nonZeros()));
  Eigen::VectorXd rhs = restrict_free(dofs, full.rhs);
  for (Eigen::Index col = 0; col < full.matrix.outerSize(); ++col) {
    const int fc = dofs.free_index[static_cast<std::size_t>(col)];
    for (SparseMatrix::InnerIterator it(full.matrix, col); it; ++it) {
      const int fr = dofs.free_index[static_cast<std::size_t>(it.row())];
      if (fr < 0) continue;
      if (fc >= 0) {
        trips.emplace_back(fr, fc, it.value());
      } else {
        rhs[fr] -= it.value() * prescribed[col];
      }
    }
  }
  ReducedSystem red;
  red.matrix.resize(nf, nf);
  red.matrix.setFromTriplets(trips.begin(), trips.end());
  red.rhs = std::move(rhs);
  red.prescribed = prescribed;
  return red;
}

ReducedSystem kv_substituted_system(const AssembledOperators& ops, const Eigen::VectorXd& u_prev, double tau,
                                    double chi, double t_k, const LoadProgram& load) {
  return eliminate_dirichlet(kv_full_system(ops, u_prev, tau, chi), ops.dofs,
                             dirichlet_vector(ops.dofs, load.dirichlet_displacement(t_k)));
}

Eigen::VectorXd expand_free(const DofMap& dofs, const Eigen::VectorXd& free_values, const Eigen::VectorXd& prescribed) {
  Eigen::VectorXd u = prescribed;
  for (std::size_t i = 0; i < dofs.free.size(); ++i) u[dofs.free[i]] = free_values[static_cast<Eigen::Index>(i)];
  return u;
}

Eigen::VectorXd restrict_free(const DofMap& dofs, const Eigen::VectorXd& full) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(dofs.free.size()));
  for (std::size_t i = 0; i < dofs.free.size(); ++i) r[static_cast<Eigen::Index>(i)] = full[dofs.free[i]];
  return r;
}

Eigen::VectorXd reaction_forces(const AssembledOperators& ops, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& u_prev, double tau, double chi) {
  Eigen::VectorXd residual = ops.stiffness * u - ops.load;
  if (tau > 0.0 && chi > 0.0) residual += (chi / tau) * (ops.stiffness * (u - u_prev));
  Eigen::VectorXd r = Eigen::VectorXd::Zero(u.size());
  for (int d : ops.dofs.dirichlet) r[d] = residual[d];
  return r;
}

Vec2 resultant(const Eigen::VectorXd& nodal_forces) {
  Vec2 s = Vec2::Zero();
  for (Eigen::Index i = 0; i + 1 < nodal_forces.size(); i += 2) {
    s.x() += nodal_forces[i];
    s.y() += nodal_forces[i + 1];
  }
  return s;
}

std::vector<ContactTraction> contact_tractions(const Mesh2D& mesh, const AdhesiveLaw& adhesive,
                                               const Eigen::VectorXd& u, const Eigen::VectorXd& z) {
  std::vector<ContactTraction> out(mesh.num_contact_edges());
  for (std::size_t c = 0; c < out.size(); ++c) {
    const Vec2 um = contact_midpoint_displacement(mesh, u, c);
    const double zc = z[static_cast<Eigen::Index>(c)];
    out[c].normal = zc * adhesive.k_n[c] * opening(um, mesh.contact_normal(c));
    out[c].tangential = zc * adhesive.k_t[c] * um.dot(mesh.contact_tangent(c));
  }
  return out;
}

}  // namespace delam
