#include "scatter1d.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace disscav {

namespace {

void check_config(const ScatterConfig& cfg) {
  if (!(cfg.r0 > 0.0) || !(cfg.r0 < 1.0))
    fail(errc::invalid_arg, "r0 must lie in (0,1)");
  if (cfg.delta_r > 0.0) fail(errc::invalid_arg, "delta_r must be <= 0");
  if (!(cfg.tau >= 0.0) || !(cfg.tau < 1.0))
    fail(errc::invalid_arg, "tau must lie in [0,1)");
  if (!(cfg.l > 0.0) || !(cfg.c > 0.0))
    fail(errc::invalid_arg, "l and c must be > 0");
  if (cfg.r0 + cfg.delta_r <= -1.0)
    fail(errc::invalid_arg, "delta_r drives the reflectivity below -1");
}

// Roots of X^2 - r(1+rho) X + rho (r^2 + t^2) = 0 in X = exp(-2ikl),
// numerically stable against cancellation in the quadratic formula.
std::pair<cplx, cplx> round_trip_roots(double r, double t2, double rho) {
  const cplx b = -r * (1.0 + rho);
  const cplx c0 = rho * (r * r + t2);
  const cplx disc = std::sqrt(b * b - 4.0 * c0);
  cplx q = (std::abs(b - disc) > std::abs(b + disc)) ? -(b - disc) / 2.0
                                                     : -(b + disc) / 2.0;
  if (std::abs(q) == 0.0) return {cplx(0.0), cplx(0.0)};
  return {q, c0 / q};
}

// Continuity-tracked root along a straight path from (r0, rho=1) to the
// target (r, rho). At the lossless point the roots are r0 +/- i t; branch
// collisions on the real axis are resolved by a secant prediction, with a
// sign rule for the complex <-> real transitions of the conjugate pair.
cplx track_branch(double r0, double t, double r_final, double rho_final,
                  scatter_branch branch) {
  constexpr int steps = 16;
  const double t2 = t * t;
  const double sgn = branch == scatter_branch::plus ? 1.0 : -1.0;

  cplx X(r0, sgn * t); // exact root at the unperturbed cavity
  cplx X_prev2;
  bool have_prev2 = false;

  for (int j = 1; j <= steps; ++j) {
    const double s = static_cast<double>(j) / steps;
    const double r = r0 + (r_final - r0) * s;
    const double rho = 1.0 + (rho_final - 1.0) * s;
    auto [z1, z2] = round_trip_roots(r, t2, rho);

    const cplx pred = have_prev2 ? 2.0 * X - X_prev2 : X;
    const double scale = std::max(1.0, std::abs(X));
    const bool was_cplx = std::abs(X.imag()) > 1e-12 * scale;
    const bool now_cplx =
        std::abs(z1.imag()) > 1e-12 * std::max(1.0, std::abs(z1));

    cplx next;
    if (was_cplx && !now_cplx) {
      // conjugate pair collapsed onto the real axis: the root that carried
      // positive imaginary part lands on the larger real root
      const cplx hi = z1.real() >= z2.real() ? z1 : z2;
      const cplx lo = z1.real() >= z2.real() ? z2 : z1;
      next = X.imag() > 0.0 ? hi : lo;
    } else if (now_cplx && !was_cplx) {
      // real pair turned complex: rejoin the configured branch sign
      next = (z1.imag() > 0.0) == (sgn > 0.0) ? z1 : z2;
    } else {
      next = std::abs(z1 - pred) <= std::abs(z2 - pred) ? z1 : z2;
    }
    if (std::abs(next - pred) > 0.5)
      fail(errc::branch_discontinuity,
           "root tracking jumped; branch does not connect to the lossless limit");
    X_prev2 = X;
    have_prev2 = true;
    X = next;
  }
  return X;
}

// k - k_c for the tracked branch, first order in ln(X/Xc).
cplx delta_k(const ScatterConfig& cfg, double r_final, double rho_final) {
  const double t = mid_transmission(cfg.r0);
  const cplx Xc(cfg.r0, cfg.branch == scatter_branch::plus ? t : -t);
  const cplx X = track_branch(cfg.r0, t, r_final, rho_final, cfg.branch);
  return cplx(0.0, -1.0) / (2.0 * cfg.l) * (1.0 - X / Xc);
}

} // namespace

double mid_transmission(double r0) { return std::sqrt(1.0 - r0 * r0); }

double lossless_resonance(double r0, double l, int n) {
  if (!(r0 >= 0.0) || !(r0 < 1.0))
    fail(errc::invalid_arg, "r0 must lie in [0,1)");
  if (!(l > 0.0)) fail(errc::invalid_arg, "l must be > 0");
  return std::acos(r0) / (2.0 * l) + M_PI * n / l;
}

ScatterResult solve_resonance(const ScatterConfig& cfg) {
  check_config(cfg);
  const double rho = std::sqrt(1.0 - cfg.tau * cfg.tau);
  const double r = cfg.r0 + cfg.delta_r;

  const cplx dk_joint = delta_k(cfg, r, rho);
  const cplx dk_tilt = delta_k(cfg, r, 1.0);
  const cplx dk_port = delta_k(cfg, cfg.r0, rho);

  ScatterResult out;
  out.k = lossless_resonance(cfg.r0, cfg.l, cfg.order) + dk_joint;
  out.delta_omega_c = cfg.c * dk_joint.real();
  out.gamma_r = -2.0 * cfg.c * dk_tilt.imag();
  out.gamma_rho = -2.0 * cfg.c * dk_port.imag();
  out.perturbative_warn =
      std::abs(cfg.delta_r) > 0.1 || cfg.tau * cfg.tau > 0.1;
  return out;
}

TiltResponse tilt_response(double r0, double t, double l, double c,
                           double delta_r, scatter_branch branch) {
  if (!(r0 > 0.0) || !(r0 < 1.0)) fail(errc::invalid_arg, "r0 must lie in (0,1)");
  if (!(t > 0.0) || !(t < 1.0)) fail(errc::invalid_arg, "t must lie in (0,1)");
  if (delta_r > 0.0) fail(errc::invalid_arg, "delta_r must be <= 0");
  if (!(l > 0.0) || !(c > 0.0)) fail(errc::invalid_arg, "l and c must be > 0");
  TiltResponse out;
  const double sgn = branch == scatter_branch::plus ? 1.0 : -1.0;
  out.delta_omega_c = sgn * c * delta_r * t / (2.0 * l);
  out.gamma_r = -c * delta_r * r0 / l;
  return out;
}

PortDecay input_port_decay(const ScatterConfig& cfg) {
  if (cfg.delta_r != 0.0)
    fail(errc::invalid_arg, "input-port decay is defined for delta_r = 0");
  check_config(cfg);

  PortDecay out;
  out.general = solve_resonance(cfg).gamma_rho;

  const double t = mid_transmission(cfg.r0);
  const double tau2 = cfg.tau * cfg.tau;
  const double sep = (t / cfg.r0) / tau2; // regime separation measure
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (tau2 == 0.0 || sep >= 3.0) {
    out.regime = decay_regime::spread;
    out.asymptotic = cfg.c * tau2 / (4.0 * cfg.l);
  } else if (sep <= 1.0 / 3.0) {
    out.regime = decay_regime::confined;
    // only the input-half mode decays at the single-sided rate
    out.asymptotic = cfg.branch == scatter_branch::minus
                         ? cfg.c * tau2 / (2.0 * cfg.l)
                         : nan;
  } else {
    out.regime = decay_regime::ambiguous;
    out.asymptotic = nan;
  }
  return out;
}

} // namespace disscav
