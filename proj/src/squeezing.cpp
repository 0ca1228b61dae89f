#include "squeezing.hpp"

#include <algorithm>
#include <cmath>

#include "linres.hpp"

namespace disscav {

SqueezingTerms squeezing_terms(const ValidatedSystem& s, double omega) {
  SqueezingTerms t;
  const double g1 = s.p.gamma1, g2 = s.p.gamma2, gm = s.p.gamma_m;
  const double gs = g1 + g2;
  t.L = 4.0 * g1 * g2 / (gs * gs + 4.0 * omega * omega);
  t.n_ba = s.Gg * s.Gg / (gm * g2);
  const cplx chi = mech_susceptibility(s, omega);
  t.M = 4.0 * t.n_ba * gm * gm * std::norm(chi) * (s.p.n_th + t.n_ba + 0.5);
  t.N = 4.0 * t.n_ba * gm * chi.real();
  t.S0 = (s.p.n_th + 0.5) / (t.n_ba + s.p.n_th + 0.5);
  return t;
}

double szz(const ValidatedSystem& s, double omega, double theta) {
  if (s.p.detuning != 0.0 || s.p.g_omega0 != 0.0)
    return rotated_output_psd(s, NoiseModel{}, omega, theta, 1);
  const SqueezingTerms t = squeezing_terms(s, omega);
  const double ct = std::cos(theta), st = std::sin(theta);
  return 1.0 + t.L * (t.M * ct * ct - t.N * st * ct);
}

QuadratureOpt optimal_quadrature(const ValidatedSystem& s, double omega) {
  QuadratureOpt q;
  if (s.p.detuning != 0.0 || s.p.g_omega0 != 0.0) {
    // engine path: the rotated PSD is a 2-theta harmonic; minimize it exactly
    const TransferMatrix T = transfer_matrix(s, omega);
    const auto S_in = input_psds(s, NoiseModel{});
    double a11 = 0.0, a22 = 0.0, a12 = 0.0;
    for (int j = 0; j < n_inputs; ++j) {
      const cplx tx = T.t[out_x1][j], ty = T.t[out_y1][j];
      a11 += S_in[j] * std::norm(tx);
      a22 += S_in[j] * std::norm(ty);
      a12 += S_in[j] * (tx * std::conj(ty)).real();
    }
    const double mean = (a11 + a22) / 2.0, ca = (a11 - a22) / 2.0, cb = a12;
    const double R = std::hypot(ca, cb);
    q.s_min = mean - R;
    double th = R == 0.0 ? 0.0 : (std::atan2(cb, ca) + M_PI) / 2.0;
    th = std::fmod(th, M_PI);
    if (th < 0.0) th += M_PI;
    q.theta_star = th;
    return q;
  }
  const SqueezingTerms t = squeezing_terms(s, omega);
  const double R = std::hypot(t.M, t.N);
  q.s_min = 1.0 + t.L * (t.M - R) / 2.0;
  if (R == 0.0) {
    q.theta_star = 0.0; // flat in theta; report the smallest angle
    return q;
  }
  double th = (M_PI - std::atan2(t.N, t.M)) / 2.0;
  th = std::fmod(th, M_PI);
  if (th < 0.0) th += M_PI;
  if (th >= M_PI) th = 0.0;
  q.theta_star = th;
  return q;
}

double asymptotic_min(const ValidatedSystem& s, double omega) {
  const SqueezingTerms t = squeezing_terms(s, omega);
  const double nu = std::abs(s.p.omega_m - omega) / s.p.gamma_m;
  const double n_tot = s.p.n_th + t.n_ba;
  const double res = s.p.omega_m / s.p.gamma_m;
  // "much less/greater" enforced as a factor of 10 on each side; edges carry
  // 1e-9 relative slack so an exactly-at-the-edge request survives rounding
  const double lo = 10.0 * (1.0 - 1e-9);
  const double hi = std::min(n_tot, res) / 10.0 * (1.0 + 1e-9);
  if (nu < lo || nu > hi)
    fail(errc::out_of_validity_band,
         "need 10 <= |omega_m-omega|/gamma_m <= min(n_th+n_ba, omega_m/gamma_m)/10");
  return t.S0 + (1.0 - t.S0) * (1.0 - t.L);
}

Cooperativity cooperativity(const ValidatedSystem& s, double omega) {
  Cooperativity c;
  c.n_ba = s.Gg * s.Gg / (s.p.gamma_m * s.p.gamma2);
  const double x = 2.0 * omega / s.p.gamma2;
  c.ratio = x * x;
  c.n_ba1 = c.n_ba * c.ratio;
  return c;
}

} // namespace disscav
