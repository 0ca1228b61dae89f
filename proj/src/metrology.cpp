#include "metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "linres.hpp"

namespace disscav {

namespace {

// Harmonic form q(phi) = c0 + ca*cos(phi) + cb*sin(phi) with phi = 2*theta,
// representing v' Q v for v = (cos theta, sin theta) and a symmetric 2x2 Q.
struct Harmonic {
  double c0 = 0.0, ca = 0.0, cb = 0.0;
  double operator()(double phi) const {
    return c0 + ca * std::cos(phi) + cb * std::sin(phi);
  }
};

Harmonic quad_form(double q11, double q22, double q12) {
  return {(q11 + q22) / 2.0, (q11 - q22) / 2.0, q12};
}

// Minimize num(phi)/den(phi) over the circle. den >= 0 with isolated zeros at
// most; critical points of the ratio satisfy A cosphi + B sin phi + C = 0.
struct RatioMin {
  double phi = 0.0;
  double value = 0.0;
};

RatioMin minimize_ratio(const Harmonic& num, const Harmonic& den) {
  const double A = den.c0 * num.cb - num.c0 * den.cb;
  const double B = num.c0 * den.ca - den.c0 * num.ca;
  const double C = num.cb * den.ca - num.ca * den.cb;
  const double R = std::hypot(A, B);

  double best_phi = 0.0;
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](double phi) {
    const double d = den(phi);
    if (d <= 0.0) return;
    const double v = num(phi) / d;
    if (v < best) {
      best = v;
      best_phi = phi;
    }
  };

  if (R > 0.0 && std::abs(C) <= R) {
    const double base = std::atan2(B, A);
    const double off = std::acos(std::clamp(-C / R, -1.0, 1.0));
    consider(base + off);
    consider(base - off);
  }
  // Degenerate configurations (constant ratio, vanishing denominator lobes)
  // fall back to a coarse scan plus golden-section polish.
  for (int k = 0; k < 64; ++k) consider(2.0 * M_PI * k / 64.0);
  if (!std::isfinite(best))
    fail(errc::zero_signal_transfer, "no signal reaches the detected port");

  double lo = best_phi - 2.0 * M_PI / 64.0, hi = best_phi + 2.0 * M_PI / 64.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
  auto ratio = [&](double phi) {
    const double d = den(phi);
    return d > 0.0 ? num(phi) / d : std::numeric_limits<double>::infinity();
  };
  double f1 = ratio(m1), f2 = ratio(m2);
  for (int it = 0; it < 120; ++it) {
    if (f1 < f2) {
      hi = m2; m2 = m1; f2 = f1;
      m1 = hi - gr * (hi - lo);
      f1 = ratio(m1);
    } else {
      lo = m1; m1 = m2; f1 = f2;
      m2 = lo + gr * (hi - lo);
      f2 = ratio(m2);
    }
  }
  consider((lo + hi) / 2.0);
  return {best_phi, best};
}

double wrap_angle(double theta) {
  theta = std::fmod(theta, M_PI);
  if (theta < 0.0) theta += M_PI;
  // the quadrature family has period pi; pi itself aliases 0
  if (theta >= M_PI) theta = 0.0;
  return theta;
}

} // namespace

ImprecisionOpt imprecision_engine(const ValidatedSystem& s, double omega) {
  const ClampedTransfer ct = clamped_transfer(s, omega);
  const auto S_in = input_psds(s, NoiseModel{});

  // noise quadratic form over (cos theta, sin theta)
  double n11 = 0.0, n22 = 0.0, n12 = 0.0;
  for (int j = 0; j < n_inputs; ++j) {
    const cplx tx = ct.noise[out_x1][j], ty = ct.noise[out_y1][j];
    n11 += S_in[j] * std::norm(tx);
    n22 += S_in[j] * std::norm(ty);
    n12 += S_in[j] * (tx * std::conj(ty)).real();
  }
  const cplx sx = ct.signal_per_u[out_x1], sy = ct.signal_per_u[out_y1];
  if (std::abs(sx) == 0.0 && std::abs(sy) == 0.0)
    fail(errc::zero_signal_transfer, "position is unobservable in port 1");
  const double s11 = std::norm(sx), s22 = std::norm(sy);
  const double s12 = (sx * std::conj(sy)).real();

  const RatioMin m = minimize_ratio(quad_form(n11, n22, n12),
                                    quad_form(s11, s22, s12));
  return {wrap_angle(m.phi / 2.0), m.value * s.p.x_zpf * s.p.x_zpf};
}

double imprecision_psd(const ValidatedSystem& s, double omega) {
  if (s.p.detuning == 0.0 && s.p.g_omega0 == 0.0) {
    if (s.gg == 0.0)
      fail(errc::zero_signal_transfer, "position is unobservable in port 1");
    const double half = (s.p.gamma1 + s.p.gamma2) / 2.0;
    return (half * half + omega * omega) / (4.0 * s.p.gamma1 * s.gg * s.gg);
  }
  return imprecision_engine(s, omega).value;
}

double backaction_psd(const ValidatedSystem& s, double omega) {
  const ClampedTransfer ct = clamped_transfer(s, omega);
  double acc = 0.0;
  for (int j = in_x1; j <= in_y2; ++j) acc += std::norm(ct.noise[out_force][j]);
  return acc;
}

ProductResult ba_imp_product(const ValidatedSystem& s, double omega) {
  ProductResult r;
  r.omega = omega;
  r.gamma_ratio = s.p.gamma2 / s.p.gamma1;

  const bool pure_dispersive = s.p.g_gamma0 == 0.0 && s.p.g_omega0 != 0.0;
  const double xi =
      pure_dispersive ? std::numeric_limits<double>::infinity()
                      : (s.p.g_gamma0 == 0.0 ? 0.0 : s.p.g_omega0 / s.p.g_gamma0);
  r.xi = xi;

  if (xi == 0.0) {
    const double gs = s.p.gamma1 + s.p.gamma2;
    r.value_norm =
        (gs * gs + 4.0 * omega * omega) / (4.0 * s.p.gamma1 * s.p.gamma2);
    return r;
  }
  if (s.p.gamma1 != s.p.gamma2)
    fail(errc::invalid_arg,
         "mixed-coupling product is defined at matched ports only");
  if (pure_dispersive) {
    r.value_norm = 2.0;
    return r;
  }
  r.value_norm = (1.0 + 2.0 * xi * xi) / (1.0 + xi * xi);
  return r;
}

double optimal_homodyne_angle(const ValidatedSystem& s) {
  if (s.p.g_gamma0 == 0.0 && s.p.g_omega0 == 0.0)
    fail(errc::no_coupling, "both couplings vanish");
  return wrap_angle(std::atan2(s.p.g_omega0, s.p.g_gamma0));
}

cplx wasted_information(const ValidatedSystem& s, double omega) {
  const double g1 = s.p.gamma1, g2 = s.p.gamma2;
  return 2.0 / std::sqrt(g2) * s.gg * cplx(g2 - g1, 2.0 * omega) /
         cplx(g2 + g1, -2.0 * omega);
}

double transmittance_sensitivity(double gamma1, double gamma2) {
  if (!std::isfinite(gamma1) || !std::isfinite(gamma2))
    fail(errc::invalid_arg, "decay rates must be finite");
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
    fail(errc::nonpositive_rate, "decay rates must be > 0");
  const double gs = gamma1 + gamma2;
  return std::sqrt(gamma1) * (gamma1 - gamma2) / (std::sqrt(gamma2) * gs * gs);
}

} // namespace disscav
