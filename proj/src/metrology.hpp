#ifndef DISSCAV_METROLOGY_HPP
#define DISSCAV_METROLOGY_HPP

#include "core.hpp"

namespace disscav {

struct ProductResult {
  double value_norm = 0.0; // imprecision * backaction in units of hbar^2/4
  double omega = 0.0;
  double gamma_ratio = 0.0; // gamma2/gamma1
  double xi = 0.0;          // g_omega0/g_gamma0 (inf for pure dispersive)
};

// Equivalent displacement noise PSD of the detected port, in x^2 per rad/s.
// Closed form [((g1+g2)/2)^2 + w^2] / (4 g1 gg^2) at detuning = 0, gw = 0;
// otherwise evaluated from the engine at the optimal homodyne angle.
// Throws zero_signal_transfer when position is unobservable in port 1.
double imprecision_psd(const ValidatedSystem& s, double omega);

// Quantum backaction force PSD on the pinned oscillator (units hbar^2):
// the vacuum-optical part of the force row with the mechanics clamped.
// Reduces to gg^2/gamma2 for gw = 0 and to a0^2 (g_gamma0^2 + 2 g_omega0^2)/g
// at matched ports, zero detuning, w -> 0.
double backaction_psd(const ValidatedSystem& s, double omega);

// Pure dissipative coupling: [(g1+g2)^2 + 4 w^2]/(4 g1 g2) at the given w.
// Mixed coupling (xi != 0): requires gamma1 = gamma2; reports the w -> 0
// value (1 + 2 xi^2)/(1 + xi^2) at the optimal homodyne angle.
ProductResult ba_imp_product(const ValidatedSystem& s, double omega);

// Quadrature angle carrying the whole position signal, in [0, pi):
// atan(g_omega0/g_gamma0). Throws no_coupling when both couplings vanish.
double optimal_homodyne_angle(const ValidatedSystem& s);

// Coefficient of x in the transmitted amplitude quadrature:
// 2 gamma2^(-1/2) gg (gamma2 - gamma1 + 2iw)/(gamma2 + gamma1 - 2iw).
cplx wasted_information(const ValidatedSystem& s, double omega);

// d/d(gamma2) of T = 2 sqrt(g1 g2)/(g1+g2):
// sqrt(g1) (g1 - g2) / (sqrt(g2) (g1+g2)^2). Zero at matched ports.
double transmittance_sensitivity(double gamma1, double gamma2);

// Internal engine path shared with the tests: minimum over the homodyne
// angle of (detected clamped noise)/(signal per u)^2, reported per unit x.
struct ImprecisionOpt {
  double theta = 0.0;
  double value = 0.0; // x^2 per rad/s
};
ImprecisionOpt imprecision_engine(const ValidatedSystem& s, double omega);

} // namespace disscav

#endif
