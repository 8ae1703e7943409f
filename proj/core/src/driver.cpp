#include "delam/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <optional>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "delam/error.hpp"

namespace delam {

void DriverConfig::validate() const {
  if (!(chi0 > 0.0)) throw std::invalid_argument("driver: chi0 must be > 0");
  if (!(tau0 > 0.0)) throw std::invalid_argument("driver: tau0 must be > 0");
  if (!(chi_final > 0.0)) throw std::invalid_argument("driver: chi_final must be > 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("driver: gamma must be > 0");
  if (!(gate_C >= 0.0)) throw std::invalid_argument("driver: gate_C must be >= 0 (0 selects the pilot calibration)");
  if (max_tau_halvings < 0) throw std::invalid_argument("driver: max_tau_halvings must be >= 0");
}

AdaptiveResult run_adaptive(const DriverConfig& cfg, const ProblemSetup& problem,
                            const std::function<void(const AdaptiveDecision&)>& on_decision) {
  cfg.validate();
  AdaptiveResult out;
  if (cfg.chi0 <= cfg.chi_final) return out;

  double chi = cfg.chi0;
  double tau = cfg.tau0;
  std::optional<RunArtifacts> pending;
  out.gate_C = cfg.gate_C;
  if (out.gate_C == 0.0) {
    pending = simulate(problem, chi, tau);
    out.gate_C = 2.0 * pending->norms.l1 / std::pow(cfg.chi0, cfg.gamma);
  }

  int halvings = 0;
  while (chi > cfg.chi_final) {
    RunArtifacts run = pending ? std::move(*pending) : simulate(problem, chi, tau);
    pending.reset();
    AdaptiveDecision d;
    d.chi = chi;
    d.tau = tau;
    d.l1 = run.norms.l1;
    d.gate = out.gate_C * std::pow(chi, cfg.gamma);
    d.accepted = d.l1 <= d.gate;
    d.steps = run.steps;
    out.trace.push_back(d);
    if (on_decision) on_decision(d);
    if (!d.accepted) {
      if (++halvings > cfg.max_tau_halvings) {
        throw NumericalError(fmt::format(
            "adaptive driver: gate ||E||_L1 <= {:.6g} not met at chi = {:.6g} s after {} tau halvings "
            "(last tau = {:.6g} s, ||E||_L1 = {:.6g}); increase gate_C or max_tau_halvings",
            d.gate, chi, cfg.max_tau_halvings, tau, d.l1));
      }
      tau *= 0.5;
      continue;
    }
    out.accepted.push_back(std::move(run));
    halvings = 0;
    chi *= 0.5;
    tau *= 0.5;
  }
  return out;
}

std::vector<SweepRow> sweep_grid(const std::vector<double>& chis, const std::vector<double>& taus,
                                 const ProblemSetup& problem, unsigned threads) {
  if (chis.empty() || taus.empty()) throw std::invalid_argument("sweep: chi and tau lists must be nonempty");
  std::vector<SweepRow> rows(chis.size() * taus.size());
  for (std::size_t i = 0; i < chis.size(); ++i) {
    for (std::size_t j = 0; j < taus.size(); ++j) {
      rows[i * taus.size() + j].chi = chis[i];
      rows[i * taus.size() + j].tau = taus[j];
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < rows.size(); r = next++) {
      SweepRow& row = rows[r];
      try {
        const RunArtifacts run = simulate(problem, row.chi, row.tau);
        row.l1 = run.norms.l1;
        row.linf = run.norms.linf;
        row.steps = run.steps;
        row.first_rupture = run.first_rupture();
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, rows.size()));
  std::vector<std::future<void>> pool;
  for (unsigned w = 1; w < threads; ++w) pool.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : pool) f.get();
  return rows;
}

}  // namespace delam
