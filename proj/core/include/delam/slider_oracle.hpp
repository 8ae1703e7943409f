#pragma once

namespace delam {

/// One-degree-of-freedom slider: a bar of length L, Young modulus E and
/// relaxation time chi, glued at x = 0 by an adhesive of stiffness K and
/// toughness alpha, pulled at x = L with velocity v_D.
struct SliderParams {
  double young = 0.0;     // E, Pa
  double length = 0.0;    // L, m
  double stiffness = 0.0; // K, Pa/m
  double alpha = 0.0;     // J/m^2
  double velocity = 0.0;  // v_D, m/s
  double chi = 0.0;       // s

  /// Throws std::invalid_argument unless all fields are > 0 (chi >= 0).
  void validate() const;
};

struct SliderCoefficients {
  double a0 = 0.0;     // m/s
  double b_chi = 0.0;  // m
  double t_chi = 0.0;  // s
};

/// While bonded, the glued end moves as u_c(t) = a0 t + b_chi (1 - exp(-t/t_chi)), with
///   a0 = E v_D / (E + LK),  b_chi = chi L E K v_D / (E + LK)^2,  t_chi = chi E / (E + LK).
SliderCoefficients coefficients(const SliderParams& p);

/// Inviscid rupture time (E + LK) / (v_D E) * sqrt(2 alpha / K).
double rupture_time_limit(const SliderParams& p);

/// Root of K u_c(t)^2 = 2 alpha by bisection on [0, 2 t_limit]. For chi == 0
/// returns rupture_time_limit. Throws std::invalid_argument if the bracket
/// holds no sign change.
double rupture_time(const SliderParams& p, double tol = 1e-14);

struct SliderSample {
  double w = 0.0;      // elongation of the bar, m
  double sigma = 0.0;  // axial stress, Pa
  double rate = 0.0;   // viscous dissipation rate, J/(m^3 s)
  double z = 1.0;
};

/// Closed-form state at time t >= 0. After rupture the bar relaxes freely:
/// w = w_rup exp(-(t - t_rup)/chi), sigma = 0. With chi == 0 the elongation
/// drops to zero at rupture and no viscous dissipation occurs.
SliderSample slider_history(const SliderParams& p, double t);

/// Time derivative of the elongation, used to check the stress identity.
double slider_elongation_rate(const SliderParams& p, double t);

struct SliderDefectMeasure {
  double time = 0.0;       // t_RUP, s
  double magnitude = 0.0;  // alpha K / E, J/m^3
};

/// Limit of the viscous dissipation density as chi -> 0: a Dirac in time at
/// the inviscid rupture time, uniform in space.
SliderDefectMeasure defect_measure_slider(const SliderParams& p);

/// Exact int_0^t rate ds of the closed-form history, J/m^3.
double slider_dissipated(const SliderParams& p, double t);

}  // namespace delam
