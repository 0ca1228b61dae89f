#ifndef DISSCAV_SQUEEZING_HPP
#define DISSCAV_SQUEEZING_HPP

#include "core.hpp"

namespace disscav {

struct SqueezingTerms {
  double L = 0.0;    // 4 g1 g2 / ((g1+g2)^2 + 4 w^2), in (0,1]
  double M = 0.0;    // 4 n_ba gamma_m^2 |chi|^2 (n_th + n_ba + 1/2), >= 0
  double N = 0.0;    // 4 n_ba gamma_m Re chi
  double n_ba = 0.0; // Gg^2 / (gamma_m gamma2)
  double S0 = 0.0;   // (n_th + 1/2) / (n_ba + n_th + 1/2)
};

SqueezingTerms squeezing_terms(const ValidatedSystem& s, double omega);

// Detected-quadrature PSD S_ZZ(w, theta) = 1 + L (M cos^2 - N sin cos) at
// zero detuning and gw = 0 (closed form, exact at every w); engine path
// otherwise. Vacuum optical inputs, thermal drive from n_th.
double szz(const ValidatedSystem& s, double omega, double theta);

struct QuadratureOpt {
  double theta_star = 0.0; // in [0, pi), ties broken toward the smaller angle
  double s_min = 0.0;      // 1 + L (M - sqrt(M^2+N^2))/2; <= 1, < 1 iff N != 0
};

QuadratureOpt optimal_quadrature(const ValidatedSystem& s, double omega);

// Narrow-band minimum S0 + (1-S0)(1-L). Valid for
// 10 <= |omega_m - w|/gamma_m <= min(n_th + n_ba, omega_m/gamma_m)/10;
// throws out_of_validity_band otherwise.
double asymptotic_min(const ValidatedSystem& s, double omega);

struct Cooperativity {
  double n_ba = 0.0;  // two-port backaction occupation
  double n_ba1 = 0.0; // single-port equivalent, n_ba * (2w/gamma2)^2
  double ratio = 0.0; // (2w/gamma2)^2
};

Cooperativity cooperativity(const ValidatedSystem& s, double omega);

} // namespace disscav

#endif
