#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "delam/energetics.hpp"
#include "delam/simulation.hpp"
#include "delam/slider_oracle.hpp"
#include "support.hpp"

using namespace delam;
using namespace delam::test;

namespace {

// Slider nodal field with glued-end displacement uc and pulled-end displacement ul.
Eigen::VectorXd slider_field(const Mesh2D& m, double uc, double ul) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.num_dofs()));
  for (std::size_t v = 0; v < m.num_nodes(); ++v) u[2 * v] = uc + (ul - uc) * m.nodes()[v].x() / kL;
  return u;
}

}  // namespace

TEST(StoredEnergy, SliderClosedForm) {
  const ProblemSetup p = slider();
  const SparseMatrix k = assemble_stiffness(p.mesh, p.material);
  const Eigen::VectorXd z = Eigen::VectorXd::Ones(1);
  const double uc = 2e-5, ul = 7e-5;
  const Eigen::VectorXd u = slider_field(p.mesh, uc, ul);
  const double eps = (ul - uc) / kL;
  EXPECT_NEAR(elastic_energy(k, u), 0.5 * kE * eps * eps * kL * kH, 1e-12 * kE * eps * eps * kL * kH);
  EXPECT_NEAR(adhesive_energy(p.mesh, p.adhesive, u, z), 0.5 * kK * uc * uc * kH, 1e-12 * kK * uc * uc * kH);
  EXPECT_EQ(adhesive_energy(p.mesh, p.adhesive, u, Eigen::VectorXd::Zero(1)), 0.0);
  EXPECT_NEAR(stored_energy(p.mesh, p.adhesive, k, u, z),
              elastic_energy(k, u) + adhesive_energy(p.mesh, p.adhesive, u, z), 1e-15);
}

TEST(StoredEnergy, AdhesiveQuadratureMatchesAssembledForm) {
  const Mesh2D m = build_rect_mesh(0.25, 0.025, 0.225, 12, 2, MeshLayout::Exp2D);
  const AdhesiveLaw law = AdhesiveLaw::uniform(m.num_contact_edges(), 150e9, 75e9, 187.5);
  Eigen::VectorXd z(static_cast<Eigen::Index>(m.num_contact_edges()));
  for (Eigen::Index c = 0; c < z.size(); ++c) z[c] = (c % 3 == 0) ? 0.0 : 1.0;
  const Eigen::VectorXd u = 1e-6 * Eigen::VectorXd::Random(static_cast<Eigen::Index>(m.num_dofs()));
  const SparseMatrix madh = assemble_adhesive(m, law, z);
  const double ref = 0.5 * u.dot(madh * u);
  EXPECT_NEAR(adhesive_energy(m, law, u, z), ref, 1e-12 * std::abs(ref));
}

TEST(ViscousRate, ZeroCases) {
  const ProblemSetup p = slider();
  MaterialKV mat = p.material;
  const Eigen::VectorXd u = slider_field(p.mesh, 1e-5, 4e-5);
  EXPECT_EQ(viscous_rate_field(p.mesh, mat, u, u, 1e-3, 1e-2).lpNorm<Eigen::Infinity>(), 0.0);
  // rigid translation
  EXPECT_NEAR(viscous_rate_field(p.mesh, mat, slider_field(p.mesh, 3e-5, 3e-5), Eigen::VectorXd::Zero(8), 1e-3, 1e-2)
                  .lpNorm<Eigen::Infinity>(),
              0.0, 1e-6);
  EXPECT_EQ(viscous_rate_field(p.mesh, mat, u, Eigen::VectorXd::Zero(8), 1e-3, 0.0).lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_THROW(viscous_rate_field(p.mesh, mat, u, u, 0.0, 1e-2), std::invalid_argument);
}

TEST(ViscousRate, UniformBarRate) {
  const ProblemSetup p = slider();
  const double tau = 1e-3, chi = 5e-3, de = 3e-5;
  const Eigen::VectorXd u = slider_field(p.mesh, 0.0, de);
  const Eigen::VectorXd r = viscous_rate_field(p.mesh, p.material, u, Eigen::VectorXd::Zero(8), tau, chi);
  const double rate = de / kL / tau;
  for (Eigen::Index t = 0; t < r.size(); ++t) EXPECT_NEAR(r[t], chi * kE * rate * rate, 1e-10 * chi * kE * rate * rate);
}

TEST(ExternalWork, TrapezoidalPlusLoad) {
  Eigen::VectorXd r1(3), r0(3), b(3), du(3);
  r1 << 2.0, 0.0, -1.0;
  r0 << 4.0, 0.0, 1.0;
  b << 0.0, 5.0, 0.0;
  du << 0.5, 0.1, 2.0;
  EXPECT_DOUBLE_EQ(external_work_increment(r1, r0, b, du), 0.5 * (6.0 * 0.5 + 0.0 * 2.0) + 0.5);
  EXPECT_EQ(external_work_increment(r1, r0, b, Eigen::VectorXd::Zero(3)), 0.0);
}

TEST(ResidualNorms, ZeroAndConstantRows) {
  std::vector<LedgerRow> rows(5);
  for (std::size_t k = 1; k < rows.size(); ++k) rows[k].tau = 0.25;
  ResidualNorms n = residual_norms(rows);
  EXPECT_EQ(n.l1, 0.0);
  EXPECT_EQ(n.linf, 0.0);
  rows[0].residual = 100.0;  // the initial row is not integrated
  for (std::size_t k = 1; k < rows.size(); ++k) rows[k].residual = -2.0;
  n = residual_norms(rows);
  EXPECT_DOUBLE_EQ(n.l1, 2.0);
  EXPECT_DOUBLE_EQ(n.linf, 2.0);
}

TEST(Ledger, IdentityAgainstIndependentRecomputation) {
  const ProblemSetup p = slider();
  const double chi = 6.25e-3, tau = kT / 400;
  std::vector<Eigen::VectorXd> us{Eigen::VectorXd::Zero(8)};
  std::vector<Eigen::VectorXd> zs{Eigen::VectorXd::Ones(1)};
  std::vector<double> taus{0.0};
  SimulationOptions opt;
  opt.on_step = [&](const SimState&, const StepReport& s, const LedgerRow&) {
    us.push_back(s.u);
    zs.push_back(s.z);
    taus.push_back(s.tau);
  };
  const RunArtifacts run = simulate(p, chi, tau, opt);
  ASSERT_EQ(us.size(), run.ledger.rows().size());

  // dense global quantities, recomputed from scratch
  const Eigen::MatrixXd k = Eigen::MatrixXd(assemble_stiffness(p.mesh, p.material));
  const Eigen::VectorXd load = assemble_load(p.mesh, p.load);
  const DofMap dofs = DofMap::build(p.mesh);
  auto stored = [&](std::size_t i) {
    const Eigen::MatrixXd ma = Eigen::MatrixXd(assemble_adhesive(p.mesh, p.adhesive, zs[i]));
    return 0.5 * us[i].dot(k * us[i]) + 0.5 * us[i].dot(ma * us[i]);
  };
  auto reaction = [&](std::size_t i) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(8);
    if (i == 0) return r;
    const Eigen::VectorXd full = (1.0 + chi / taus[i]) * (k * us[i]) - (chi / taus[i]) * (k * us[i - 1]) - load;
    for (int d : dofs.dirichlet) r[d] = full[d];
    return r;
  };

  double visc = 0.0, work = 0.0;
  const double e0 = stored(0);
  double scale = 0.0;
  std::vector<double> ref(us.size(), 0.0);
  for (std::size_t i = 1; i < us.size(); ++i) {
    const Eigen::VectorXd v = (us[i] - us[i - 1]) / taus[i];
    visc += taus[i] * chi * v.dot(k * v);
    work += 0.5 * (reaction(i) + reaction(i - 1)).dot(us[i] - us[i - 1]) + load.dot(us[i] - us[i - 1]);
    const double adh = kAlpha * kH * (1.0 - zs[i][0]);
    ref[i] = stored(i) - e0 + visc + adh - work;
    scale = std::max({scale, std::abs(work), visc, adh});
  }
  for (std::size_t i = 1; i < us.size(); ++i) {
    EXPECT_NEAR(run.ledger.rows()[i].residual, ref[i], 1e-12 * scale) << i;
    EXPECT_NEAR(residual(run.ledger, i), ref[i], 1e-12 * scale) << i;
  }
}

TEST(Ledger, DissipationMonotoneAndFieldConsistent) {
  const ProblemSetup p = slider();
  const RunArtifacts run = simulate(p, 6.25e-3, kT / 800);
  const auto& rows = run.ledger.rows();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].viscous_cum, rows[i - 1].viscous_cum);
    EXPECT_GE(rows[i].adhesive_cum, rows[i - 1].adhesive_cum);
  }
  const Eigen::VectorXd& d = defect_cumulative(run.ledger);
  double total = 0.0;
  for (Eigen::Index t = 0; t < d.size(); ++t) total += d[t] * p.mesh.signed_area(static_cast<std::size_t>(t));
  EXPECT_NEAR(total, rows.back().viscous_cum, 1e-12 * rows.back().viscous_cum);
  EXPECT_NEAR(d[0], d[1], 1e-10 * d[0]);
  EXPECT_NEAR(rows.back().adhesive_cum, kAlpha * kH, 1e-12 * kAlpha * kH);
}

TEST(Ledger, DefectDensityPlateausAfterRupture) {
  const ProblemSetup p = slider();
  const double chi = 3.125e-3, tau = kT / 3200;
  const double tr = rupture_time(slider_params(chi));
  double at_plateau = -1.0;
  SimulationOptions opt;
  opt.snapshot_stride = 1;
  opt.on_snapshot = [&](const FieldSnapshot& s) {
    if (at_plateau < 0.0 && s.t >= tr + 10 * chi) at_plateau = s.defect_density[0];
  };
  const RunArtifacts run = simulate(p, chi, tau, opt);
  ASSERT_GT(at_plateau, 0.0);
  const double final = defect_cumulative(run.ledger)[0];
  EXPECT_LE(std::abs(final - at_plateau), 1e-3 * final);
}

TEST(Ledger, ResidualDecaysWithTauForViscousRuns) {
  const ProblemSetup p = slider();
  const double coarse = simulate(p, 6.25e-3, kT / 200).norms.l1;
  const double fine = simulate(p, 6.25e-3, kT / 800).norms.l1;
  EXPECT_LT(fine, 0.5 * coarse);
}

TEST(Ledger, ResidualStagnatesWithoutViscosity) {
  const ProblemSetup p = slider();
  const RunArtifacts coarse = simulate(p, 0.0, kT / 200);
  const RunArtifacts fine = simulate(p, 0.0, kT / 800);
  EXPECT_GT(fine.norms.l1, 0.5 * coarse.norms.l1);
  EXPECT_EQ(defect_cumulative(fine.ledger).lpNorm<Eigen::Infinity>(), 0.0);
  // the elastic energy released at rupture is unaccounted for
  const double eps = (kV - coefficients(slider_params(0.0)).a0) / kL;
  const double tl = rupture_time_limit(slider_params(0.0));
  EXPECT_GT(fine.norms.linf, 0.5 * 0.5 * kE * std::pow(eps * tl, 2) * kL * kH);
}

TEST(ViscousRate, PlateauReachedAfterTenRelaxationTimes) {
  const ProblemSetup p = slider();
  const double chi = 6.25e-3, tau = kT / 3200;
  const double t_chi = coefficients(slider_params(chi)).t_chi;
  const double e = kE + kL * kK;
  const double plateau = chi * kE * kK * kK * kV * kV / (e * e);
  double rate = -1.0;
  SimulationOptions opt;
  opt.on_step = [&](const SimState& prev, const StepReport& s, const LedgerRow&) {
    if (rate < 0.0 && s.t >= 10 * t_chi) rate = viscous_rate_field(p.mesh, p.material, s.u, prev.u, s.tau, chi)[0];
  };
  simulate(p, chi, tau, opt);
  EXPECT_NEAR(rate, plateau, 1e-3 * plateau);
}

// With trapezoidal support work and z frozen over two steps, each step adds exactly
// 1/2 chi tau_k v_k' K (v_k - v_{k-1}) to the residual, v_k = (u_k - u_{k-1}) / tau_k.
TEST(Ledger, PerStepDefectMatchesDiscreteIdentity) {
  const ProblemSetup p = slider();
  const double chi = 6.25e-3;
  const SparseMatrix k = assemble_stiffness(p.mesh, p.material);
  std::vector<Eigen::VectorXd> vel{Eigen::VectorXd::Zero(8)};
  std::vector<double> taus{0.0};
  std::vector<bool> rupture{false};
  SimulationOptions opt;
  opt.on_step = [&](const SimState& prev, const StepReport& s, const LedgerRow&) {
    vel.push_back((s.u - prev.u) / s.tau);
    taus.push_back(s.tau);
    rupture.push_back(!s.ruptured.empty());
  };
  const RunArtifacts run = simulate(p, chi, kT / 800, opt);
  const auto& inc = run.ledger.step_defects();
  ASSERT_EQ(inc.size() + 1, vel.size());
  const double scale = run.ledger.energy_scale();
  int checked = 0;
  double positive = 0.0;
  for (std::size_t i = 1; i < vel.size(); ++i) {
    if (rupture[i] || rupture[i - 1]) continue;
    const double expect = 0.5 * chi * taus[i] * vel[i].dot(k * (vel[i] - vel[i - 1]));
    EXPECT_NEAR(inc[i - 1], expect, 1e-12 * scale) << i;
    positive = std::max(positive, run.ledger.rows()[i].residual);
    ++checked;
  }
  EXPECT_EQ(checked, 798);
  // the residual turns positive while the viscous velocity still accelerates
  EXPECT_GT(positive, 0.0);
}
