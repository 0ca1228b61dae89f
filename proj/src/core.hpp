#ifndef DISSCAV_CORE_HPP
#define DISSCAV_CORE_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace disscav {

using cplx = std::complex<double>;

// Error taxonomy; mirrors the C status codes one-to-one.
enum class errc {
  ok = 0,
  invalid_arg,
  nonpositive_rate,
  overdamped_oscillator,
  negative_occupation,
  zero_signal_transfer,
  no_coupling,
  out_of_validity_band,
  unknown_output_index,
  singular_system,
  unstable_system,
  resolution_error,
  branch_discontinuity,
  ambiguous_regime,
};

const char* errc_name(errc e);

class model_error : public std::runtime_error {
public:
  model_error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw model_error(code, what);
}

struct CavitySystem {
  double gamma1 = 1.0;   // detected-port decay rate
  double gamma2 = 1.0;   // loss-port decay rate at the working point
  double detuning = 0.0; // laser minus cavity resonance
  double g_gamma0 = 0.0; // -(1/2) d(gamma2)/dx
  double g_omega0 = 0.0; // -d(omega_c)/dx
  double a0 = 1.0;       // intracavity amplitude, real by convention
  double omega_m = 1.0;
  double gamma_m = 1e-3;
  double n_th = 0.0;
  double x_zpf = 1.0;
};

// Immutable validated view with the derived couplings cached.
// gg/gw are the drive-enhanced couplings per unit length; Gg/Gw carry rate
// units after multiplication by x_zpf. All linear in a0.
struct ValidatedSystem {
  CavitySystem p;
  double gg = 0.0; // g_gamma0 * a0
  double gw = 0.0; // g_omega0 * a0
  double Gg = 0.0; // gg * x_zpf
  double Gw = 0.0; // gw * x_zpf
  bool overdamp_warn = false; // gamma_m/omega_m > 0.1
};

// Throws model_error on any invariant violation. Idempotent:
// validate(v.p) reproduces v exactly.
ValidatedSystem validate(const CavitySystem& s);

struct NoiseModel {
  double laser_amp_excess = 0.0;   // classical excess on port-1 amplitude
  double laser_phase_excess = 0.0; // classical excess on port-1 phase
};

NoiseModel validate_noise(const NoiseModel& n);

} // namespace disscav

#endif
