#pragma once

#include <functional>
#include <string>
#include <vector>

#include "delam/simulation.hpp"

namespace delam {

struct DriverConfig {
  double chi0 = 0.0;       // s
  double tau0 = 0.0;       // s
  double chi_final = 0.0;  // s
  /// Gate constant C in ||E||_L1 <= C chi^gamma (J s^(1-gamma)). 0 calibrates it
  /// from a pilot run at (chi0, tau0) as 2 ||E||_L1 / chi0^gamma.
  double gate_C = 0.0;
  double gamma = 1.0;
  int max_tau_halvings = 20;  // per chi level

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;

  bool operator==(const DriverConfig&) const = default;
};

struct AdaptiveDecision {
  double chi = 0.0;
  double tau = 0.0;
  double l1 = 0.0;
  double gate = 0.0;  // C chi^gamma
  bool accepted = false;
  int steps = 0;
};

struct AdaptiveResult {
  double gate_C = 0.0;
  std::vector<RunArtifacts> accepted;
  std::vector<AdaptiveDecision> trace;
};

/// Joint chi -> 0, tau -> 0 loop:
///   simulate at (chi, tau); if ||E||_L1 > C chi^gamma then tau /= 2 and retry;
///   otherwise accept, chi /= 2, tau /= 2; stop once chi <= chi_final.
/// Throws NumericalError when one chi level needs more than max_tau_halvings.
/// `on_decision` receives every gate evaluation as it happens.
AdaptiveResult run_adaptive(const DriverConfig& cfg, const ProblemSetup& problem,
                            const std::function<void(const AdaptiveDecision&)>& on_decision = {});

struct SweepRow {
  double chi = 0.0;
  double tau = 0.0;
  double l1 = 0.0;
  double linf = 0.0;
  int steps = 0;
  double first_rupture = 0.0;
  bool ok = false;
  std::string error;
};

/// Full factorial (chi, tau) study in row-major order (chi outer). Runs are
/// independent and execute on up to `threads` workers (0: hardware
/// concurrency); a failed run is recorded in its row and the sweep continues.
std::vector<SweepRow> sweep_grid(const std::vector<double>& chis, const std::vector<double>& taus,
                                 const ProblemSetup& problem, unsigned threads = 0);

}  // namespace delam
