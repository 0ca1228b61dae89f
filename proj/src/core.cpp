#include "core.hpp"

#include <cmath>

namespace disscav {

const char* errc_name(errc e) {
  switch (e) {
    case errc::ok: return "Ok";
    case errc::invalid_arg: return "InvalidArg";
    case errc::nonpositive_rate: return "NonPositiveRate";
    case errc::overdamped_oscillator: return "OverdampedOscillator";
    case errc::negative_occupation: return "NegativeOccupation";
    case errc::zero_signal_transfer: return "ZeroSignalTransfer";
    case errc::no_coupling: return "NoCoupling";
    case errc::out_of_validity_band: return "OutOfValidityBand";
    case errc::unknown_output_index: return "UnknownOutputIndex";
    case errc::singular_system: return "SingularSystem";
    case errc::unstable_system: return "UnstableSystem";
    case errc::resolution_error: return "ResolutionError";
    case errc::branch_discontinuity: return "BranchDiscontinuity";
    case errc::ambiguous_regime: return "AmbiguousRegime";
  }
  return "Unknown";
}

ValidatedSystem validate(const CavitySystem& s) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(s.gamma1) || !finite(s.gamma2) || !finite(s.detuning) ||
      !finite(s.g_gamma0) || !finite(s.g_omega0) || !finite(s.a0) ||
      !finite(s.omega_m) || !finite(s.gamma_m) || !finite(s.n_th) ||
      !finite(s.x_zpf))
    fail(errc::invalid_arg, "non-finite parameter");
  if (s.gamma1 <= 0.0) fail(errc::nonpositive_rate, "gamma1 must be > 0");
  if (s.gamma2 <= 0.0) fail(errc::nonpositive_rate, "gamma2 must be > 0");
  if (s.gamma_m <= 0.0) fail(errc::nonpositive_rate, "gamma_m must be > 0");
  if (s.omega_m <= 0.0) fail(errc::nonpositive_rate, "omega_m must be > 0");
  if (s.x_zpf <= 0.0) fail(errc::nonpositive_rate, "x_zpf must be > 0");
  if (s.gamma_m >= s.omega_m)
    fail(errc::overdamped_oscillator, "gamma_m must stay below omega_m");
  if (s.n_th < 0.0) fail(errc::negative_occupation, "n_th must be >= 0");
  if (s.a0 < 0.0) fail(errc::invalid_arg, "a0 must be >= 0 (real drive)");

  ValidatedSystem v;
  v.p = s;
  v.gg = s.g_gamma0 * s.a0;
  v.gw = s.g_omega0 * s.a0;
  v.Gg = v.gg * s.x_zpf;
  v.Gw = v.gw * s.x_zpf;
  v.overdamp_warn = s.gamma_m / s.omega_m > 0.1;
  return v;
}

NoiseModel validate_noise(const NoiseModel& n) {
  if (!std::isfinite(n.laser_amp_excess) || !std::isfinite(n.laser_phase_excess))
    fail(errc::invalid_arg, "non-finite noise parameter");
  if (n.laser_amp_excess < 0.0 || n.laser_phase_excess < 0.0)
    fail(errc::invalid_arg, "classical excess must be >= 0");
  return n;
}

} // namespace disscav
