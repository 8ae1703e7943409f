#include "delam/output.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace delam {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  return out;
}

void close_checked(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace

void write_timeseries(std::ostream& out, const EnergyLedger& ledger) {
  out << "k,t,stored_J,viscous_cum_J,adhesive_cum_J,work_cum_J,residual_J,reaction_x_N,reaction_y_N,bonded_fraction\n";
  const auto& rows = ledger.rows();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const LedgerRow& r = rows[i];
    fmt::print(out, "{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.k, r.t,
               r.stored, r.viscous_cum, r.adhesive_cum, r.work_cum, r.residual, r.reaction.x(), r.reaction.y(),
               r.bonded_fraction);
  }
}

void write_timeseries(const std::filesystem::path& path, const EnergyLedger& ledger) {
  auto out = open_out(path);
  write_timeseries(out, ledger);
  close_checked(out, path);
}

void write_field_snapshot(const std::filesystem::path& vtk_path, const Mesh2D& mesh,
                          const Eigen::VectorXd& defect_density, const Eigen::VectorXd& z, int k, double t) {
  const std::size_t nt = mesh.num_triangles();
  const std::size_t nc = mesh.num_contact_edges();
  if (static_cast<std::size_t>(defect_density.size()) != nt || static_cast<std::size_t>(z.size()) != nc) {
    throw std::invalid_argument("field snapshot: field sizes do not match the mesh");
  }
  {
    auto out = open_out(vtk_path);
    out << "# vtk DataFile Version 3.0\n";
    fmt::print(out, "delam step {} t={:.17g}\n", k, t);
    out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    fmt::print(out, "POINTS {} double\n", mesh.num_nodes());
    for (const Vec2& p : mesh.nodes()) fmt::print(out, "{:.17g} {:.17g} 0\n", p.x(), p.y());
    fmt::print(out, "CELLS {} {}\n", nt + nc, 4 * nt + 3 * nc);
    for (const auto& tri : mesh.triangles()) fmt::print(out, "3 {} {} {}\n", tri[0], tri[1], tri[2]);
    for (std::size_t c = 0; c < nc; ++c) {
      const auto& e = mesh.contact_edge(c);
      fmt::print(out, "2 {} {}\n", e.nodes[0], e.nodes[1]);
    }
    fmt::print(out, "CELL_TYPES {}\n", nt + nc);
    for (std::size_t i = 0; i < nt; ++i) out << "5\n";
    for (std::size_t i = 0; i < nc; ++i) out << "3\n";
    fmt::print(out, "CELL_DATA {}\n", nt + nc);
    out << "SCALARS defect_density double 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < nt; ++i) fmt::print(out, "{:.17g}\n", defect_density[static_cast<Eigen::Index>(i)]);
    for (std::size_t i = 0; i < nc; ++i) out << "0\n";
    out << "SCALARS z double 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < nt; ++i) out << "-1\n";
    for (std::size_t i = 0; i < nc; ++i) fmt::print(out, "{:.17g}\n", z[static_cast<Eigen::Index>(i)]);
    out << "SCALARS cell_kind int 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < nt; ++i) out << "0\n";
    for (std::size_t i = 0; i < nc; ++i) out << "1\n";
    close_checked(out, vtk_path);
  }

  std::filesystem::path csv_path = vtk_path;
  csv_path.replace_extension(".csv");
  auto csv = open_out(csv_path);
  csv << "kind,index,cx,cy,measure,defect_density,z\n";
  for (std::size_t i = 0; i < nt; ++i) {
    const auto& tri = mesh.triangles()[i];
    const Vec2 cen = (mesh.nodes()[tri[0]] + mesh.nodes()[tri[1]] + mesh.nodes()[tri[2]]) / 3.0;
    fmt::print(csv, "triangle,{},{:.17g},{:.17g},{:.17g},{:.17g},\n", i, cen.x(), cen.y(), mesh.signed_area(i),
               defect_density[static_cast<Eigen::Index>(i)]);
  }
  for (std::size_t c = 0; c < nc; ++c) {
    const Vec2 m = mesh.contact_edge_midpoint(c);
    fmt::print(csv, "contact,{},{:.17g},{:.17g},{:.17g},,{:.17g}\n", c, m.x(), m.y(), mesh.contact_edge_length(c),
               z[static_cast<Eigen::Index>(c)]);
  }
  close_checked(csv, csv_path);
}

void write_oracle_history(const std::filesystem::path& path, const SliderParams& params,
                          const std::vector<double>& times) {
  auto out = open_out(path);
  out << "t,w_m,sigma_Pa,rate_J_per_m3s,z,dissipated_J_per_m3\n";
  for (double t : times) {
    const SliderSample s = slider_history(params, t);
    fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", t, s.w, s.sigma, s.rate, s.z,
               slider_dissipated(params, t));
  }
  close_checked(out, path);
}

void write_sweep_table(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  auto out = open_out(path);
  out << "chi_s,tau_s,l1_Js,linf_J,steps,first_rupture_s,status\n";
  for (const auto& r : rows) {
    std::string status = r.ok ? "ok" : "error: " + r.error;
    for (char& ch : status) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g},{}\n", r.chi, r.tau, r.l1, r.linf, r.steps,
               r.first_rupture, status);
  }
  close_checked(out, path);
}

void write_adaptive_trace(const std::filesystem::path& path, const std::vector<AdaptiveDecision>& trace) {
  auto out = open_out(path);
  out << "chi_s,tau_s,l1_Js,gate_Js,steps,decision\n";
  for (const auto& d : trace) {
    fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g},{},{}\n", d.chi, d.tau, d.l1, d.gate, d.steps,
               d.accepted ? "accept" : "halve_tau");
  }
  close_checked(out, path);
}

void write_provenance(const std::filesystem::path& dir, const RunConfig& cfg) {
  const auto path = dir / "config.echo.cfg";
  auto out = open_out(path);
  fmt::print(out, "# delam {}\n", version_string());
  out << emit_config(cfg);
  close_checked(out, path);
}

}  // namespace delam
