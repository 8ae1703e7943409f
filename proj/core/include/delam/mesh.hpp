#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace delam {

using Vec2 = Eigen::Vector2d;

enum class BoundaryTag { Dirichlet, Neumann, Contact, Free };

std::string_view to_string(BoundaryTag tag);
BoundaryTag parse_boundary_tag(std::string_view name);

struct BoundaryEdge {
  std::array<int, 2> nodes;
  BoundaryTag tag;

  bool operator==(const BoundaryEdge&) const = default;
};

/// Planar triangulation with tagged boundary.
///
/// Node i owns displacement DOFs 2i (x) and 2i+1 (y). Contact edges are
/// numbered in the order they appear in `edges()`; delamination variables
/// and adhesive data are indexed by that contact-edge number.
class Mesh2D {
 public:
  Mesh2D() = default;

  /// Builds and validates a mesh. `contact_normals` holds one unit outward
  /// normal per CONTACT edge, in edge order. Throws MeshError on any broken
  /// invariant.
  Mesh2D(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> triangles,
         std::vector<BoundaryEdge> edges, std::vector<Vec2> contact_normals);

  const std::vector<Vec2>& nodes() const { return nodes_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<BoundaryEdge>& edges() const { return edges_; }

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_dofs() const { return 2 * nodes_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  /// Indices into edges() of the CONTACT edges, in contact-edge order.
  const std::vector<int>& contact_edges() const { return contact_edges_; }
  std::size_t num_contact_edges() const { return contact_edges_.size(); }
  const BoundaryEdge& contact_edge(std::size_t c) const { return edges_[contact_edges_[c]]; }
  const Vec2& contact_normal(std::size_t c) const { return contact_normals_[c]; }
  const std::vector<Vec2>& contact_normals() const { return contact_normals_; }
  /// Tangent obtained by rotating the outward normal by +90 degrees.
  Vec2 contact_tangent(std::size_t c) const;
  double contact_edge_length(std::size_t c) const;
  Vec2 contact_edge_midpoint(std::size_t c) const;
  double total_contact_length() const;

  /// Sorted, unique node indices lying on DIRICHLET / CONTACT edges.
  std::vector<int> dirichlet_nodes() const;
  std::vector<int> contact_nodes() const;

  double signed_area(std::size_t tri) const;
  double total_area() const;

  bool operator==(const Mesh2D&) const = default;

 private:
  void validate() const;

  std::vector<Vec2> nodes_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<BoundaryEdge> edges_;
  std::vector<Vec2> contact_normals_;
  std::vector<int> contact_edges_;
};

/// SLIDER: the left side x = 0 (full height) is CONTACT, the right side
/// x = length is DIRICHLET, top and bottom are NEUMANN.
/// EXP2D: the bottom segment x in [0, contact_length] is CONTACT, the rest of
/// the bottom is FREE, the right side x = length is DIRICHLET, the left side
/// and top are NEUMANN.
enum class MeshLayout { Slider, Exp2D };

std::string_view to_string(MeshLayout layout);
MeshLayout parse_mesh_layout(std::string_view name);

/// Structured right-diagonal triangulation of [0,length] x [0,height] with
/// nx x ny cells (two triangles per cell).
///
/// For SLIDER `contact_length` must equal `height`. For EXP2D the bottom row
/// is split into round(nx * contact_length / length) uniform cells under the
/// contact segment and uniform cells over the remainder, so the contact end
/// always falls on a node; the contact segment must leave at least one cell
/// between itself and the DIRICHLET side.
Mesh2D build_rect_mesh(double length, double height, double contact_length, int nx, int ny,
                       MeshLayout layout);

/// Plain-text mesh format:
///
///     delam-mesh 1
///     nodes <N>
///     <x> <y>                      (N lines)
///     triangles <M>
///     <a> <b> <c>                  (M lines, counter-clockwise)
///     edges <E>
///     <a> <b> <TAG>                (E lines, TAG in DIRICHLET|NEUMANN|CONTACT|FREE)
///     contact_normals <C>
///     <nx> <ny>                    (C lines, one per CONTACT edge in edge order)
///
/// Reals are written with 17 significant digits so the round-trip is exact.
void write_mesh(std::ostream& out, const Mesh2D& mesh);
void write_mesh(const std::filesystem::path& path, const Mesh2D& mesh);
Mesh2D read_mesh(std::istream& in);
Mesh2D read_mesh(const std::filesystem::path& path);

}  // namespace delam
