#include "disscav/disscav.h"

#include <cmath>
#include <new>
#include <utility>
#include <vector>

#include "core.hpp"
#include "linres.hpp"
#include "metrology.hpp"
#include "oracle.hpp"
#include "scatter1d.hpp"
#include "squeezing.hpp"

using namespace disscav;

struct dc_system {
  ValidatedSystem v;
};

struct dc_psd_result {
  PsdEstimate est;
};

namespace {

dc_status to_status(errc e) {
  switch (e) {
    case errc::ok: return DC_OK;
    case errc::invalid_arg: return DC_ERR_INVALID_ARG;
    case errc::nonpositive_rate: return DC_ERR_NONPOSITIVE_RATE;
    case errc::overdamped_oscillator: return DC_ERR_OVERDAMPED;
    case errc::negative_occupation: return DC_ERR_NEGATIVE_OCCUPATION;
    case errc::zero_signal_transfer: return DC_ERR_ZERO_SIGNAL;
    case errc::no_coupling: return DC_ERR_NO_COUPLING;
    case errc::out_of_validity_band: return DC_ERR_OUT_OF_BAND;
    case errc::unknown_output_index: return DC_ERR_UNKNOWN_OUTPUT;
    case errc::singular_system: return DC_ERR_SINGULAR;
    case errc::unstable_system: return DC_ERR_UNSTABLE;
    case errc::resolution_error: return DC_ERR_RESOLUTION;
    case errc::branch_discontinuity: return DC_ERR_BRANCH_DISCONTINUITY;
    case errc::ambiguous_regime: return DC_ERR_AMBIGUOUS_REGIME;
  }
  return DC_ERR_INTERNAL;
}

template <typename F>
dc_status guard(F&& f) noexcept {
  try {
    f();
    return DC_OK;
  } catch (const model_error& e) {
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    return DC_ERR_ALLOC;
  } catch (...) {
    return DC_ERR_INTERNAL;
  }
}

CavitySystem from_params(const dc_params& p) {
  CavitySystem s;
  s.gamma1 = p.gamma1;
  s.gamma2 = p.gamma2;
  s.detuning = p.detuning;
  s.g_gamma0 = p.g_gamma0;
  s.g_omega0 = p.g_omega0;
  s.a0 = p.a0;
  s.omega_m = p.omega_m;
  s.gamma_m = p.gamma_m;
  s.n_th = p.n_th;
  s.x_zpf = p.x_zpf;
  return s;
}

NoiseModel from_noise(const dc_noise* n) {
  NoiseModel m;
  if (n != nullptr) {
    m.laser_amp_excess = n->laser_amp_excess;
    m.laser_phase_excess = n->laser_phase_excess;
  }
  return validate_noise(m);
}

ScatterConfig from_scatter(const dc_scatter_config& c) {
  if (c.branch != DC_BRANCH_PLUS && c.branch != DC_BRANCH_MINUS)
    fail(errc::invalid_arg, "branch must be +1 or -1");
  ScatterConfig cfg;
  cfg.r0 = c.r0;
  cfg.delta_r = c.delta_r;
  cfg.tau = c.tau;
  cfg.l = c.l;
  cfg.c = c.c;
  cfg.branch =
      c.branch == DC_BRANCH_PLUS ? scatter_branch::plus : scatter_branch::minus;
  cfg.order = c.order;
  return cfg;
}

} // namespace

extern "C" {

const char* dc_status_name(dc_status s) {
  switch (s) {
    case DC_OK: return "Ok";
    case DC_ERR_INVALID_ARG: return "InvalidArg";
    case DC_ERR_NONPOSITIVE_RATE: return "NonPositiveRate";
    case DC_ERR_OVERDAMPED: return "OverdampedOscillator";
    case DC_ERR_NEGATIVE_OCCUPATION: return "NegativeOccupation";
    case DC_ERR_ZERO_SIGNAL: return "ZeroSignalTransfer";
    case DC_ERR_NO_COUPLING: return "NoCoupling";
    case DC_ERR_OUT_OF_BAND: return "OutOfValidityBand";
    case DC_ERR_UNKNOWN_OUTPUT: return "UnknownOutputIndex";
    case DC_ERR_SINGULAR: return "SingularSystem";
    case DC_ERR_UNSTABLE: return "UnstableSystem";
    case DC_ERR_RESOLUTION: return "ResolutionError";
    case DC_ERR_BRANCH_DISCONTINUITY: return "BranchDiscontinuity";
    case DC_ERR_AMBIGUOUS_REGIME: return "AmbiguousRegime";
    case DC_ERR_ALLOC: return "AllocationFailure";
    case DC_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

dc_status dc_system_create(const dc_params* p, dc_system** out) {
  if (p == nullptr || out == nullptr) return DC_ERR_INVALID_ARG;
  *out = nullptr;
  return guard([&] { *out = new dc_system{validate(from_params(*p))}; });
}

void dc_system_destroy(dc_system* s) { delete s; }

dc_status dc_system_overdamp_warning(const dc_system* s, int* warn) {
  if (s == nullptr || warn == nullptr) return DC_ERR_INVALID_ARG;
  *warn = s->v.overdamp_warn ? 1 : 0;
  return DC_OK;
}

dc_status dc_system_couplings(const dc_system* s, double* gg, double* gw,
                              double* Gg, double* Gw) {
  if (s == nullptr) return DC_ERR_INVALID_ARG;
  if (gg != nullptr) *gg = s->v.gg;
  if (gw != nullptr) *gw = s->v.gw;
  if (Gg != nullptr) *Gg = s->v.Gg;
  if (Gw != nullptr) *Gw = s->v.Gw;
  return DC_OK;
}

dc_status dc_mech_susceptibility(const dc_system* s, double omega,
                                 double out[2]) {
  if (s == nullptr || out == nullptr || !std::isfinite(omega))
    return DC_ERR_INVALID_ARG;
  return guard([&] {
    const cplx chi = mech_susceptibility(s->v, omega);
    out[0] = chi.real();
    out[1] = chi.imag();
  });
}

dc_status dc_closed_loop_susceptibility(const dc_system* s, double omega,
                                        double out[2]) {
  if (s == nullptr || out == nullptr || !std::isfinite(omega))
    return DC_ERR_INVALID_ARG;
  return guard([&] {
    const cplx chi = closed_loop_susceptibility(s->v, omega);
    out[0] = chi.real();
    out[1] = chi.imag();
  });
}

dc_status dc_transfer_matrix(const dc_system* s, double omega, double re[30],
                             double im[30]) {
  if (s == nullptr || re == nullptr || im == nullptr || !std::isfinite(omega))
    return DC_ERR_INVALID_ARG;
  return guard([&] {
    const TransferMatrix T = transfer_matrix(s->v, omega);
    for (int i = 0; i < n_outputs; ++i)
      for (int j = 0; j < n_inputs; ++j) {
        re[i * n_inputs + j] = T.t[i][j].real();
        im[i * n_inputs + j] = T.t[i][j].imag();
      }
  });
}

dc_status dc_output_psd(const dc_system* s, const dc_noise* n, double omega,
                        int output_index, double* out) {
  if (s == nullptr || out == nullptr || !std::isfinite(omega))
    return DC_ERR_INVALID_ARG;
  return guard(
      [&] { *out = output_psd(s->v, from_noise(n), omega, output_index); });
}

dc_status dc_rotated_output_psd(const dc_system* s, const dc_noise* n,
                                double omega, double theta, double* out) {
  if (s == nullptr || out == nullptr || !std::isfinite(omega) ||
      !std::isfinite(theta))
    return DC_ERR_INVALID_ARG;
  return guard(
      [&] { *out = rotated_output_psd(s->v, from_noise(n), omega, theta, 1); });
}

dc_status dc_imprecision_psd(const dc_system* s, double omega, double* out) {
  if (s == nullptr || out == nullptr || !std::isfinite(omega))
    return DC_ERR_INVALID_ARG;
  return guard([&] { *out = imprecision_psd(s->v, omega); });
}

dc_status dc_backaction_psd(const dc_system* s, double omega, double* out) {
  if (s == nullptr || out == nullptr || !std::isfinite(omega))
    return DC_ERR_INVALID_ARG;
  return guard([&] { *out = backaction_psd(s->v, omega); });
}

dc_status dc_ba_imp_product(const dc_system* s, double omega,
                            dc_product* out) {
  if (s == nullptr || out == nullptr || !std::isfinite(omega))
    return DC_ERR_INVALID_ARG;
  return guard([&] {
    const ProductResult r = ba_imp_product(s->v, omega);
    out->value_norm = r.value_norm;
    out->omega = r.omega;
    out->gamma_ratio = r.gamma_ratio;
    out->xi = r.xi;
  });
}

dc_status dc_optimal_homodyne_angle(const dc_system* s, double* out) {
  if (s == nullptr || out == nullptr) return DC_ERR_INVALID_ARG;
  return guard([&] { *out = optimal_homodyne_angle(s->v); });
}

dc_status dc_wasted_information(const dc_system* s, double omega,
                                double out[2]) {
  if (s == nullptr || out == nullptr || !std::isfinite(omega))
    return DC_ERR_INVALID_ARG;
  return guard([&] {
    const cplx w = wasted_information(s->v, omega);
    out[0] = w.real();
    out[1] = w.imag();
  });
}

dc_status dc_transmittance_sensitivity(double gamma1, double gamma2,
                                       double* out) {
  if (out == nullptr) return DC_ERR_INVALID_ARG;
  return guard([&] { *out = transmittance_sensitivity(gamma1, gamma2); });
}

dc_status dc_squeezing_terms_eval(const dc_system* s, double omega,
                                  dc_squeezing_terms* out) {
  if (s == nullptr || out == nullptr || !std::isfinite(omega))
    return DC_ERR_INVALID_ARG;
  return guard([&] {
    const SqueezingTerms t = squeezing_terms(s->v, omega);
    out->L = t.L;
    out->M = t.M;
    out->N = t.N;
    out->n_ba = t.n_ba;
    out->S0 = t.S0;
  });
}

dc_status dc_szz(const dc_system* s, double omega, double theta, double* out) {
  if (s == nullptr || out == nullptr || !std::isfinite(omega) ||
      !std::isfinite(theta))
    return DC_ERR_INVALID_ARG;
  return guard([&] { *out = szz(s->v, omega, theta); });
}

dc_status dc_optimal_quadrature(const dc_system* s, double omega,
                                double* theta_star, double* s_min) {
  if (s == nullptr || !std::isfinite(omega)) return DC_ERR_INVALID_ARG;
  return guard([&] {
    const QuadratureOpt q = optimal_quadrature(s->v, omega);
    if (theta_star != nullptr) *theta_star = q.theta_star;
    if (s_min != nullptr) *s_min = q.s_min;
  });
}

dc_status dc_asymptotic_min(const dc_system* s, double omega, double* out) {
  if (s == nullptr || out == nullptr || !std::isfinite(omega))
    return DC_ERR_INVALID_ARG;
  return guard([&] { *out = asymptotic_min(s->v, omega); });
}

dc_status dc_cooperativity(const dc_system* s, double omega, double* n_ba,
                           double* n_ba1, double* ratio) {
  if (s == nullptr || !std::isfinite(omega)) return DC_ERR_INVALID_ARG;
  return guard([&] {
    const Cooperativity c = cooperativity(s->v, omega);
    if (n_ba != nullptr) *n_ba = c.n_ba;
    if (n_ba1 != nullptr) *n_ba1 = c.n_ba1;
    if (ratio != nullptr) *ratio = c.ratio;
  });
}

dc_status dc_lossless_resonance(double r0, double l, int n, double* out) {
  if (out == nullptr) return DC_ERR_INVALID_ARG;
  return guard([&] { *out = lossless_resonance(r0, l, n); });
}

dc_status dc_solve_resonance(const dc_scatter_config* cfg,
                             dc_scatter_result* out) {
  if (cfg == nullptr || out == nullptr) return DC_ERR_INVALID_ARG;
  return guard([&] {
    const ScatterResult r = solve_resonance(from_scatter(*cfg));
    out->k_re = r.k.real();
    out->k_im = r.k.imag();
    out->delta_omega_c = r.delta_omega_c;
    out->gamma_r = r.gamma_r;
    out->gamma_rho = r.gamma_rho;
    out->perturbative_warn = r.perturbative_warn ? 1 : 0;
  });
}

dc_status dc_tilt_response(double r0, double t, double l, double c,
                           double delta_r, int branch, double* delta_omega_c,
                           double* gamma_r) {
  if (branch != DC_BRANCH_PLUS && branch != DC_BRANCH_MINUS)
    return DC_ERR_INVALID_ARG;
  return guard([&] {
    const TiltResponse rsp = tilt_response(
        r0, t, l, c, delta_r,
        branch == DC_BRANCH_PLUS ? scatter_branch::plus : scatter_branch::minus);
    if (delta_omega_c != nullptr) *delta_omega_c = rsp.delta_omega_c;
    if (gamma_r != nullptr) *gamma_r = rsp.gamma_r;
  });
}

dc_status dc_input_port_decay(const dc_scatter_config* cfg, double* general,
                              double* asymptotic, int* regime) {
  if (cfg == nullptr) return DC_ERR_INVALID_ARG;
  PortDecay d;
  const dc_status st = guard([&] { d = input_port_decay(from_scatter(*cfg)); });
  if (st != DC_OK) return st;
  if (general != nullptr) *general = d.general;
  if (asymptotic != nullptr) *asymptotic = d.asymptotic;
  if (regime != nullptr) {
    switch (d.regime) {
      case decay_regime::spread: *regime = DC_REGIME_SPREAD; break;
      case decay_regime::confined: *regime = DC_REGIME_CONFINED; break;
      case decay_regime::ambiguous: *regime = DC_REGIME_AMBIGUOUS; break;
    }
  }
  return d.regime == decay_regime::ambiguous ? DC_ERR_AMBIGUOUS_REGIME : DC_OK;
}

dc_status dc_simulate_psd(const dc_system* s, const dc_noise* n,
                          const dc_sim_config* cfg, const int* outputs,
                          int n_requested, dc_psd_result** out) {
  if (s == nullptr || cfg == nullptr || out == nullptr)
    return DC_ERR_INVALID_ARG;
  if (n_requested < 0 || (n_requested > 0 && outputs == nullptr))
    return DC_ERR_INVALID_ARG;
  *out = nullptr;
  return guard([&] {
    SimConfig sc;
    sc.dt = cfg->dt;
    sc.duration = cfg->duration;
    sc.n_segments = cfg->n_segments;
    sc.seed = cfg->seed;
    sc.decimate = cfg->decimate;
    sc.outputs.assign(outputs, outputs + n_requested);
    *out = new dc_psd_result{simulate_psd(s->v, from_noise(n), sc)};
  });
}

void dc_psd_result_destroy(dc_psd_result* r) { delete r; }

dc_status dc_psd_result_bins(const dc_psd_result* r, size_t* n_bins) {
  if (r == nullptr || n_bins == nullptr) return DC_ERR_INVALID_ARG;
  *n_bins = r->est.omega.size();
  return DC_OK;
}

dc_status dc_psd_result_view(const dc_psd_result* r, int output_slot,
                             const double** omega, const double** psd,
                             const double** se) {
  if (r == nullptr) return DC_ERR_INVALID_ARG;
  if (output_slot < 0 ||
      output_slot >= static_cast<int>(r->est.outputs.size()))
    return DC_ERR_UNKNOWN_OUTPUT;
  if (omega != nullptr) *omega = r->est.omega.data();
  if (psd != nullptr) *psd = r->est.psd[output_slot].data();
  if (se != nullptr) *se = r->est.se[output_slot].data();
  return DC_OK;
}

const char* dc_version(void) { return "1.0.0"; }

} // extern "C"
