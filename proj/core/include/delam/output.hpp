#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "delam/config.hpp"
#include "delam/driver.hpp"
#include "delam/energetics.hpp"
#include "delam/mesh.hpp"
#include "delam/slider_oracle.hpp"

namespace delam {

/// Header: k,t,stored_J,viscous_cum_J,adhesive_cum_J,work_cum_J,residual_J,reaction_x_N,reaction_y_N,bonded_fraction
/// One row per step k >= 1, reals with 17 significant digits.
void write_timeseries(std::ostream& out, const EnergyLedger& ledger);
void write_timeseries(const std::filesystem::path& path, const EnergyLedger& ledger);

/// Legacy ASCII VTK unstructured grid: triangles (cell_kind 0) followed by
/// the contact edges as lines (cell_kind 1). Cell data: defect_density
/// (J/m^3, 0 on lines) and z (-1 on triangles). A CSV twin with columns
/// kind,index,cx,cy,measure,defect_density,z is written next to it with the
/// extension replaced by .csv.
void write_field_snapshot(const std::filesystem::path& vtk_path, const Mesh2D& mesh,
                          const Eigen::VectorXd& defect_density, const Eigen::VectorXd& z, int k, double t);

/// CSV t,w_m,sigma_Pa,rate_J_per_m3s,z,dissipated_J_per_m3 sampled at `times`.
void write_oracle_history(const std::filesystem::path& path, const SliderParams& params,
                          const std::vector<double>& times);

/// CSV chi_s,tau_s,l1_Js,linf_J,steps,first_rupture_s,status.
void write_sweep_table(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

/// CSV chi_s,tau_s,l1_Js,gate_Js,steps,decision.
void write_adaptive_trace(const std::filesystem::path& path, const std::vector<AdaptiveDecision>& trace);

/// Writes config.echo.cfg (the resolved configuration, prefixed by a
/// version comment) into `dir`, creating it if needed.
void write_provenance(const std::filesystem::path& dir, const RunConfig& cfg);

}  // namespace delam
