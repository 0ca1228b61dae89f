#ifndef DISSCAV_SCATTER1D_HPP
#define DISSCAV_SCATTER1D_HPP

#include "core.hpp"

namespace disscav {

enum class scatter_branch { plus, minus };

// Two-mirror Fabry-Perot of total length 2l with a lossy, partially
// transmissive mirror half way. The middle mirror's transmission is fixed by
// unitarity at normal incidence: t = sqrt(1 - r0^2); tilt only adds loss
// through delta_r <= 0. The input mirror has transmission tau, rho derived.
struct ScatterConfig {
  double r0 = 0.5;      // in (0,1)
  double delta_r = 0.0; // <= 0
  double tau = 0.0;     // in [0,1)
  double l = 1.0;       // > 0
  double c = 1.0;       // > 0
  scatter_branch branch = scatter_branch::plus;
  int order = 0; // longitudinal index of the unperturbed resonance
};

struct ScatterResult {
  cplx k;                       // complex resonance wavevector
  double delta_omega_c = 0.0;   // c * Re(k - k_c) of the joint perturbation
  double gamma_r = 0.0;         // decay with tilt only (rho = 1)
  double gamma_rho = 0.0;       // decay with input coupling only (delta_r = 0)
  bool perturbative_warn = false; // |delta_r| > 0.1 or tau^2 > 0.1
};

double mid_transmission(double r0); // sqrt(1 - r0^2)

// k_c = arccos(r0)/(2l) + pi*n/l, i.e. cos(2 k_c l) = r0.
double lossless_resonance(double r0, double l, int n);

// Tracks the selected branch of the resonance condition from the lossless
// point (r0, rho=1) to (r0+delta_r, rho) and reports
// k = k_c - (i/2l)(1 - X/X_c). Throws branch_discontinuity when the tracked
// root jumps by more than the continuity tolerance.
ScatterResult solve_resonance(const ScatterConfig& cfg);

struct TiltResponse {
  double delta_omega_c = 0.0; // (+/-) c delta_r t / (2l), sign of the branch
  double gamma_r = 0.0;       // -c delta_r r0 / l
};

TiltResponse tilt_response(double r0, double t, double l, double c,
                           double delta_r, scatter_branch branch);

enum class decay_regime {
  spread,   // t/r0 >> tau^2: mode spans both halves, gamma_rho -> c tau^2/(4l)
  confined, // t/r0 << tau^2: input-half mode, gamma_rho -> c tau^2/(2l)
  ambiguous // within a factor of 3: neither limit applies
};

struct PortDecay {
  double general = 0.0;    // from the full solver
  double asymptotic = 0.0; // NaN when no limit applies to the regime/branch
  decay_regime regime = decay_regime::ambiguous;
};

// Requires delta_r = 0. In the confined regime the closed-form rate describes
// the input-half mode only (the minus branch); the plus branch is the nearly
// isolated far-half mode and gets no asymptotic value.
PortDecay input_port_decay(const ScatterConfig& cfg);

} // namespace disscav

#endif
