#include "delam/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "delam/error.hpp"

namespace delam {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Dirichlet: return "DIRICHLET";
    case BoundaryTag::Neumann: return "NEUMANN";
    case BoundaryTag::Contact: return "CONTACT";
    case BoundaryTag::Free: return "FREE";
  }
  return "?";
}

BoundaryTag parse_boundary_tag(std::string_view name) {
  if (name == "DIRICHLET") return BoundaryTag::Dirichlet;
  if (name == "NEUMANN") return BoundaryTag::Neumann;
  if (name == "CONTACT") return BoundaryTag::Contact;
  if (name == "FREE") return BoundaryTag::Free;
  throw MeshError(fmt::format("unknown boundary tag '{}'", name));
}

std::string_view to_string(MeshLayout layout) {
  return layout == MeshLayout::Slider ? "SLIDER" : "EXP2D";
}

MeshLayout parse_mesh_layout(std::string_view name) {
  if (name == "SLIDER") return MeshLayout::Slider;
  if (name == "EXP2D") return MeshLayout::Exp2D;
  throw MeshError(fmt::format("unknown mesh layout '{}' (expected SLIDER or EXP2D)", name));
}

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

}  // namespace

Mesh2D::Mesh2D(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> triangles,
               std::vector<BoundaryEdge> edges, std::vector<Vec2> contact_normals)
    : nodes_(std::move(nodes)),
      triangles_(std::move(triangles)),
      edges_(std::move(edges)),
      contact_normals_(std::move(contact_normals)) {
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].tag == BoundaryTag::Contact) contact_edges_.push_back(static_cast<int>(e));
  }
  validate();
}

void Mesh2D::validate() const {
  const int n = static_cast<int>(nodes_.size());
  auto in_range = [n](int i) { return i >= 0 && i < n; };

  // Boundary edges of the triangulation, with the vertex opposite to each.
  std::map<EdgeKey, std::pair<int, int>> edge_count;  // -> (count, opposite vertex)
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int v : tri) {
      if (!in_range(v)) throw MeshError(fmt::format("triangle {} references node {} out of range", t, v));
    }
    if (!(signed_area(t) > 0.0)) {
      throw MeshError(fmt::format("triangle {} has non-positive signed area {}", t, signed_area(t)));
    }
    for (int i = 0; i < 3; ++i) {
      auto& slot = edge_count[key(tri[i], tri[(i + 1) % 3])];
      ++slot.first;
      slot.second = tri[(i + 2) % 3];
    }
  }

  std::map<EdgeKey, int> tagged;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& edge = edges_[e];
    if (!in_range(edge.nodes[0]) || !in_range(edge.nodes[1])) {
      throw MeshError(fmt::format("boundary edge {} references a node out of range", e));
    }
    const EdgeKey k = key(edge.nodes[0], edge.nodes[1]);
    auto it = edge_count.find(k);
    if (it == edge_count.end() || it->second.first != 1) {
      throw MeshError(fmt::format("edge {} ({}, {}) is not a boundary edge of the triangulation", e,
                                  edge.nodes[0], edge.nodes[1]));
    }
    if (!tagged.emplace(k, static_cast<int>(e)).second) {
      throw MeshError(fmt::format("boundary edge ({}, {}) tagged twice", k.first, k.second));
    }
  }
  for (const auto& [k, info] : edge_count) {
    if (info.first == 1 && !tagged.contains(k)) {
      throw MeshError(fmt::format("boundary edge ({}, {}) carries no tag", k.first, k.second));
    }
  }

  if (contact_normals_.size() != contact_edges_.size()) {
    throw MeshError(fmt::format("{} contact normals given for {} contact edges",
                                contact_normals_.size(), contact_edges_.size()));
  }
  for (std::size_t c = 0; c < contact_edges_.size(); ++c) {
    const auto& edge = contact_edge(c);
    const Vec2& nrm = contact_normals_[c];
    if (std::abs(nrm.norm() - 1.0) > 1e-12) {
      throw MeshError(fmt::format("contact normal {} is not unit length", c));
    }
    const Vec2 dir = nodes_[edge.nodes[1]] - nodes_[edge.nodes[0]];
    if (std::abs(nrm.dot(dir)) > 1e-9 * dir.norm()) {
      throw MeshError(fmt::format("contact normal {} is not perpendicular to its edge", c));
    }
    const int opposite = edge_count.at(key(edge.nodes[0], edge.nodes[1])).second;
    if (nrm.dot(contact_edge_midpoint(c) - nodes_[opposite]) <= 0.0) {
      throw MeshError(fmt::format("contact normal {} points into the body", c));
    }
  }

  const auto dnodes = dirichlet_nodes();
  for (int v : contact_nodes()) {
    if (std::binary_search(dnodes.begin(), dnodes.end(), v)) {
      throw MeshError(fmt::format("node {} is shared by CONTACT and DIRICHLET boundaries", v));
    }
  }
}

Vec2 Mesh2D::contact_tangent(std::size_t c) const {
  const Vec2& n = contact_normals_[c];
  return {-n.y(), n.x()};
}

double Mesh2D::contact_edge_length(std::size_t c) const {
  const auto& e = contact_edge(c);
  return (nodes_[e.nodes[1]] - nodes_[e.nodes[0]]).norm();
}

Vec2 Mesh2D::contact_edge_midpoint(std::size_t c) const {
  const auto& e = contact_edge(c);
  return 0.5 * (nodes_[e.nodes[0]] + nodes_[e.nodes[1]]);
}

double Mesh2D::total_contact_length() const {
  double sum = 0.0;
  for (std::size_t c = 0; c < num_contact_edges(); ++c) sum += contact_edge_length(c);
  return sum;
}

namespace {

std::vector<int> nodes_with_tag(const std::vector<BoundaryEdge>& edges, BoundaryTag tag) {
  std::vector<int> out;
  for (const auto& e : edges) {
    if (e.tag == tag) {
      out.push_back(e.nodes[0]);
      out.push_back(e.nodes[1]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<int> Mesh2D::dirichlet_nodes() const { return nodes_with_tag(edges_, BoundaryTag::Dirichlet); }
std::vector<int> Mesh2D::contact_nodes() const { return nodes_with_tag(edges_, BoundaryTag::Contact); }

double Mesh2D::signed_area(std::size_t tri) const {
  const auto& t = triangles_[tri];
  const Vec2 a = nodes_[t[1]] - nodes_[t[0]];
  const Vec2 b = nodes_[t[2]] - nodes_[t[0]];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

double Mesh2D::total_area() const {
  double sum = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) sum += signed_area(t);
  return sum;
}

// ---------------------------------------------------------------------------

Mesh2D build_rect_mesh(double length, double height, double contact_length, int nx, int ny,
                       MeshLayout layout) {
  if (!(length > 0.0) || !(height > 0.0) || !(contact_length > 0.0)) {
    throw MeshError("mesh dimensions must be strictly positive");
  }
  if (nx < 1 || ny < 1) throw MeshError("mesh requires nx >= 1 and ny >= 1");
  if (contact_length > length) {
    throw MeshError(fmt::format("contact length {} exceeds body length {}", contact_length, length));
  }

  // x-coordinates of the node columns
  std::vector<double> xs(nx + 1);
  if (layout == MeshLayout::Slider) {
    if (std::abs(contact_length - height) > 1e-12 * height) {
      throw MeshError("SLIDER layout glues the full side: contact_length must equal height");
    }
    for (int i = 0; i <= nx; ++i) xs[i] = length * i / nx;
  } else {
    if (nx < 2) throw MeshError("EXP2D layout requires nx >= 2");
    const int nc = std::clamp(static_cast<int>(std::lround(nx * contact_length / length)), 1, nx - 1);
    if (contact_length >= length) {
      throw MeshError("EXP2D contact segment must not reach the DIRICHLET side");
    }
    for (int i = 0; i <= nc; ++i) xs[i] = contact_length * i / nc;
    for (int i = nc + 1; i <= nx; ++i) {
      xs[i] = contact_length + (length - contact_length) * (i - nc) / (nx - nc);
    }
    xs[nx] = length;
  }

  std::vector<Vec2> nodes;
  nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    const double y = height * j / ny;
    for (int i = 0; i <= nx; ++i) nodes.emplace_back(xs[i], y);
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };

  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }

  std::vector<BoundaryEdge> edges;
  std::vector<Vec2> normals;
  const bool slider = layout == MeshLayout::Slider;
  // bottom, left to right
  for (int i = 0; i < nx; ++i) {
    BoundaryTag tag = BoundaryTag::Neumann;
    if (!slider) tag = xs[i + 1] <= contact_length * (1.0 + 1e-12) ? BoundaryTag::Contact : BoundaryTag::Free;
    edges.push_back({{id(i, 0), id(i + 1, 0)}, tag});
    if (tag == BoundaryTag::Contact) normals.emplace_back(0.0, -1.0);
  }
  // right side, bottom to top
  for (int j = 0; j < ny; ++j) edges.push_back({{id(nx, j), id(nx, j + 1)}, BoundaryTag::Dirichlet});
  // top, right to left
  for (int i = nx; i > 0; --i) edges.push_back({{id(i, ny), id(i - 1, ny)}, BoundaryTag::Neumann});
  // left side, top to bottom
  for (int j = ny; j > 0; --j) {
    const BoundaryTag tag = slider ? BoundaryTag::Contact : BoundaryTag::Neumann;
    edges.push_back({{id(0, j), id(0, j - 1)}, tag});
    if (tag == BoundaryTag::Contact) normals.emplace_back(-1.0, 0.0);
  }

  return Mesh2D(std::move(nodes), std::move(tris), std::move(edges), std::move(normals));
}

// ---------------------------------------------------------------------------

void write_mesh(std::ostream& out, const Mesh2D& mesh) {
  fmt::print(out, "delam-mesh 1\nnodes {}\n", mesh.num_nodes());
  for (const auto& p : mesh.nodes()) fmt::print(out, "{:.17g} {:.17g}\n", p.x(), p.y());
  fmt::print(out, "triangles {}\n", mesh.num_triangles());
  for (const auto& t : mesh.triangles()) fmt::print(out, "{} {} {}\n", t[0], t[1], t[2]);
  fmt::print(out, "edges {}\n", mesh.edges().size());
  for (const auto& e : mesh.edges()) fmt::print(out, "{} {} {}\n", e.nodes[0], e.nodes[1], to_string(e.tag));
  fmt::print(out, "contact_normals {}\n", mesh.num_contact_edges());
  for (const auto& n : mesh.contact_normals()) fmt::print(out, "{:.17g} {:.17g}\n", n.x(), n.y());
}

void write_mesh(const std::filesystem::path& path, const Mesh2D& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  write_mesh(out, mesh);
  if (!out) throw std::runtime_error(fmt::format("error writing '{}'", path.string()));
}

namespace {

std::size_t read_section(std::istream& in, std::string_view expected) {
  std::string word;
  std::size_t count = 0;
  if (!(in >> word >> count) || word != expected) {
    throw MeshError(fmt::format("mesh file: expected section '{}'", expected));
  }
  return count;
}

}  // namespace

Mesh2D read_mesh(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "delam-mesh" || version != 1) {
    throw MeshError("mesh file: missing 'delam-mesh 1' header");
  }
  std::vector<Vec2> nodes(read_section(in, "nodes"));
  for (auto& p : nodes) {
    if (!(in >> p.x() >> p.y())) throw MeshError("mesh file: truncated node list");
  }
  std::vector<std::array<int, 3>> tris(read_section(in, "triangles"));
  for (auto& t : tris) {
    if (!(in >> t[0] >> t[1] >> t[2])) throw MeshError("mesh file: truncated triangle list");
  }
  std::vector<BoundaryEdge> edges(read_section(in, "edges"));
  for (auto& e : edges) {
    std::string tag;
    if (!(in >> e.nodes[0] >> e.nodes[1] >> tag)) throw MeshError("mesh file: truncated edge list");
    e.tag = parse_boundary_tag(tag);
  }
  std::vector<Vec2> normals(read_section(in, "contact_normals"));
  for (auto& n : normals) {
    if (!(in >> n.x() >> n.y())) throw MeshError("mesh file: truncated normal list");
  }
  return Mesh2D(std::move(nodes), std::move(tris), std::move(edges), std::move(normals));
}

Mesh2D read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError(fmt::format("cannot open mesh file '{}'", path.string()));
  return read_mesh(in);
}

}  // namespace delam
