#include "delam/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace delam {

ProblemSetup slider_problem(double young, double length, double height, double k_n, double k_t, double alpha,
                            double velocity, double horizon) {
  ProblemSetup p;
  p.mesh = build_rect_mesh(length, height, height, 1, 1, MeshLayout::Slider);
  p.material.young = young;
  p.material.poisson = 0.0;
  p.adhesive = AdhesiveLaw::uniform(p.mesh.num_contact_edges(), k_n, k_t, alpha);
  p.load.dirichlet_velocity = Vec2(velocity, 0.0);
  p.load.horizon = horizon;
  return p;
}

double RunArtifacts::first_rupture() const {
  double t = std::numeric_limits<double>::quiet_NaN();
  for (double r : rupture_times) {
    if (!std::isnan(r) && !(r >= t)) t = r;
  }
  return t;
}

double RunArtifacts::last_rupture() const {
  double t = -std::numeric_limits<double>::infinity();
  for (double r : rupture_times) {
    if (std::isnan(r)) return std::numeric_limits<double>::quiet_NaN();
    t = std::max(t, r);
  }
  return rupture_times.empty() ? std::numeric_limits<double>::quiet_NaN() : t;
}

int step_count(double horizon, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("time step tau must be > 0");
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be >= 0");
  const double n = std::ceil(horizon / tau * (1.0 - 1e-12));
  if (n > 1e9) throw std::invalid_argument("too many time steps");
  return static_cast<int>(n);
}

RunArtifacts simulate(const ProblemSetup& problem, double chi, double tau, const SimulationOptions& options) {
  problem.load.validate();
  problem.material.validate();
  if (!(chi >= 0.0)) throw std::invalid_argument("relaxation time chi must be >= 0");
  const int n = step_count(problem.load.horizon, tau);

  Stepper stepper(problem.mesh, problem.material, problem.adhesive, problem.load, problem.qp);
  SimState state = SimState::initial(problem.mesh);

  RunArtifacts out;
  out.chi = chi;
  out.tau = tau;
  out.ledger = EnergyLedger(problem.mesh, problem.material, problem.adhesive, stepper.operators(), state);
  out.rupture_times.assign(problem.mesh.num_contact_edges(), std::numeric_limits<double>::quiet_NaN());

  auto snapshot = [&](const SimState& s) {
    if (options.on_snapshot) options.on_snapshot({s.k, s.t, out.ledger.defect_density(), s.z});
  };

  for (int k = 1; k <= n; ++k) {
    const double t_target = k == n ? problem.load.horizon : k * tau;
    const double dt = k == n ? problem.load.horizon - (n - 1) * tau : tau;
    auto [next, report] = stepper.advance(state, dt, chi, t_target);
    out.ledger.record(state, report, chi);
    out.qp_iterations += report.qp_iterations;
    for (int c : report.ruptured) out.rupture_times[static_cast<std::size_t>(c)] = report.t;
    for (Eigen::Index c = 0; c < report.z.size(); ++c) {
      const double a = problem.adhesive.alpha[static_cast<std::size_t>(c)];
      if (report.z[c] != 0.0 && report.driving_energy[c] > a * (1.0 + 1e-9)) out.semistable = false;
    }
    if (options.on_step) options.on_step(state, report, out.ledger.back());
    state = std::move(next);
    if (options.snapshot_stride > 0 && k % options.snapshot_stride == 0 && k != n) snapshot(state);
  }
  snapshot(state);

  out.steps = n;
  out.norms = residual_norms(out.ledger);
  out.factorizations = stepper.factorizations();
  out.final_state = std::move(state);
  out.ledger.seal();
  return out;
}

}  // namespace delam
