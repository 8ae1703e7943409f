#pragma once

#include "delam/simulation.hpp"
#include "delam/slider_oracle.hpp"

namespace delam::test {

// Slider data: E = 70 GPa, L = 0.1 m, H = 12.5 mm, K = 150 GPa/m,
// alpha = 375 J/m^2, v_D = 267 um/s, T = 0.375 s.
inline constexpr double kE = 70e9;
inline constexpr double kL = 0.1;
inline constexpr double kH = 0.0125;
inline constexpr double kK = 150e9;
inline constexpr double kAlpha = 375.0;
inline constexpr double kV = 267e-6;
inline constexpr double kT = 0.375;

inline ProblemSetup slider() { return slider_problem(kE, kL, kH, kK, kK, kAlpha, kV, kT); }

inline SliderParams slider_params(double chi) { return {kE, kL, kK, kAlpha, kV, chi}; }

}  // namespace delam::test
