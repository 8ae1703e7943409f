#include "delam/slider_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace delam {

void SliderParams::validate() const {
  if (!(young > 0.0 && length > 0.0 && stiffness > 0.0 && alpha > 0.0 && velocity > 0.0)) {
    throw std::invalid_argument("slider: E, L, K, alpha and v_D must be > 0");
  }
  if (!(chi >= 0.0)) throw std::invalid_argument("slider: chi must be >= 0");
}

SliderCoefficients coefficients(const SliderParams& p) {
  p.validate();
  const double s = p.young + p.length * p.stiffness;
  return {p.young * p.velocity / s, p.chi * p.length * p.young * p.stiffness * p.velocity / (s * s),
          p.chi * p.young / s};
}

double rupture_time_limit(const SliderParams& p) {
  p.validate();
  return (p.young + p.length * p.stiffness) / (p.velocity * p.young) * std::sqrt(2.0 * p.alpha / p.stiffness);
}

namespace {

double glued_displacement(const SliderCoefficients& c, double t) {
  if (c.t_chi == 0.0) return c.a0 * t;
  return c.a0 * t + c.b_chi * (-std::expm1(-t / c.t_chi));
}

}  // namespace

double rupture_time(const SliderParams& p, double tol) {
  const double limit = rupture_time_limit(p);
  if (p.chi == 0.0) return limit;
  const SliderCoefficients c = coefficients(p);
  const double target = std::sqrt(2.0 * p.alpha / p.stiffness);
  double lo = 0.0, hi = 2.0 * limit;
  auto f = [&](double t) { return glued_displacement(c, t) - target; };
  if (!(f(lo) < 0.0 && f(hi) > 0.0)) throw std::invalid_argument("slider: rupture equation has no root in bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double slider_elongation_rate(const SliderParams& p, double t) {
  if (t < 0.0) throw std::invalid_argument("slider: t must be >= 0");
  const SliderCoefficients c = coefficients(p);
  const double tr = rupture_time(p);
  if (t <= tr) {
    const double decay = c.t_chi > 0.0 ? std::exp(-t / c.t_chi) : 0.0;
    return p.velocity - c.a0 - (c.t_chi > 0.0 ? c.b_chi / c.t_chi * decay : 0.0);
  }
  if (p.chi == 0.0) return 0.0;
  const double wr = p.velocity * tr - glued_displacement(c, tr);
  return -wr / p.chi * std::exp(-(t - tr) / p.chi);
}

SliderSample slider_history(const SliderParams& p, double t) {
  if (t < 0.0) throw std::invalid_argument("slider: t must be >= 0");
  const SliderCoefficients c = coefficients(p);
  const double tr = rupture_time(p);
  SliderSample s;
  if (t <= tr) {
    const double uc = glued_displacement(c, t);
    s.w = p.velocity * t - uc;
    s.sigma = p.stiffness * uc;
    if (p.chi > 0.0) {
      const double g = -std::expm1(-t / c.t_chi);
      const double e = p.young + p.length * p.stiffness;
      s.rate = p.chi * p.young * p.stiffness * p.stiffness * p.velocity * p.velocity / (e * e) * g * g;
    }
    s.z = 1.0;
    return s;
  }
  s.z = 0.0;
  if (p.chi == 0.0) return s;
  const double wr = p.velocity * tr - glued_displacement(c, tr);
  const double decay = std::exp(-(t - tr) / p.chi);
  s.w = wr * decay;
  s.rate = p.young * (wr / p.length) * (wr / p.length) / p.chi * decay * decay;
  return s;
}

SliderDefectMeasure defect_measure_slider(const SliderParams& p) {
  return {rupture_time_limit(p), p.alpha * p.stiffness / p.young};
}

double slider_dissipated(const SliderParams& p, double t) {
  if (t < 0.0) throw std::invalid_argument("slider: t must be >= 0");
  if (p.chi == 0.0) return 0.0;
  const SliderCoefficients c = coefficients(p);
  const double tr = rupture_time(p);
  const double e = p.young + p.length * p.stiffness;
  const double plateau = p.chi * p.young * p.stiffness * p.stiffness * p.velocity * p.velocity / (e * e);
  auto pre = [&](double s) {
    return plateau * (s + 2.0 * c.t_chi * std::expm1(-s / c.t_chi) - 0.5 * c.t_chi * std::expm1(-2.0 * s / c.t_chi));
  };
  if (t <= tr) return pre(t);
  const double wr = p.velocity * tr - glued_displacement(c, tr);
  return pre(tr) - 0.5 * p.young * (wr / p.length) * (wr / p.length) * std::expm1(-2.0 * (t - tr) / p.chi);
}

}  // namespace delam
