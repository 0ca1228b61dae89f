#ifndef DISSCAV_H
#define DISSCAV_H

/* disscav: measurement and squeezing limits of a two-port optical cavity whose
 * second-port decay rate (and optionally the resonance frequency) is modulated
 * by a mechanical oscillator.
 *
 * Conventions, used consistently everywhere:
 *   - all spectra are symmetrized and two-sided, in angular-frequency units;
 *   - vacuum input quadratures have unit PSD;
 *   - force spectra are reported in units of hbar^2 and the
 *     backaction-imprecision product in units of hbar^2/4, so no value of
 *     hbar ever enters the library;
 *   - the drive amplitude a0 is real, port 2 carries no coherent field.
 *
 * Every call returns a dc_status and writes results through out-pointers.
 * Handles are opaque, immutable after creation, and safe to share across
 * threads. Destroy functions accept NULL.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DC_API __declspec(dllexport)
#elif defined(__GNUC__)
#define DC_API __attribute__((visibility("default")))
#else
#define DC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dc_status {
  DC_OK = 0,
  DC_ERR_INVALID_ARG = 1,
  DC_ERR_NONPOSITIVE_RATE = 2,      /* a decay rate or frequency is <= 0 */
  DC_ERR_OVERDAMPED = 3,            /* gamma_m >= omega_m */
  DC_ERR_NEGATIVE_OCCUPATION = 4,   /* n_th < 0 */
  DC_ERR_ZERO_SIGNAL = 5,           /* position is unobservable in the chosen port */
  DC_ERR_NO_COUPLING = 6,           /* both couplings vanish */
  DC_ERR_OUT_OF_BAND = 7,           /* asymptotic formula outside its validity band */
  DC_ERR_UNKNOWN_OUTPUT = 8,        /* output index not in [0,6) */
  DC_ERR_SINGULAR = 9,              /* linear solve failed (defensive; not expected) */
  DC_ERR_UNSTABLE = 10,             /* closed-loop pole in the right half plane */
  DC_ERR_RESOLUTION = 11,           /* time step or duration insufficient */
  DC_ERR_BRANCH_DISCONTINUITY = 12, /* resonance branch tracking lost continuity */
  DC_ERR_AMBIGUOUS_REGIME = 13,     /* neither port-decay limit applies */
  DC_ERR_ALLOC = 14,
  DC_ERR_INTERNAL = 15
} dc_status;

/* Stable identifier for a status code, e.g. "ZeroSignalTransfer". */
DC_API const char* dc_status_name(dc_status s);

/* ---------------------------------------------------------------- system -- */

typedef struct dc_params {
  double gamma1;   /* detected-port decay rate, > 0 */
  double gamma2;   /* loss-port decay rate at the working point, > 0 */
  double detuning; /* laser frequency minus cavity resonance */
  double g_gamma0; /* dissipative coupling, -(1/2) d(gamma2)/dx, per length */
  double g_omega0; /* dispersive coupling, -d(omega_c)/dx, per length */
  double a0;       /* intracavity drive amplitude, real, >= 0 */
  double omega_m;  /* mechanical resonance, > 0 */
  double gamma_m;  /* mechanical damping, 0 < gamma_m < omega_m */
  double n_th;     /* thermal phonon occupation, >= 0 */
  double x_zpf;    /* zero-point fluctuation amplitude, > 0 */
} dc_params;

typedef struct dc_system dc_system;

DC_API dc_status dc_system_create(const dc_params* p, dc_system** out);
DC_API void dc_system_destroy(dc_system* s);

/* warn = 1 when gamma_m/omega_m > 0.1 (weak-damping assumption strained). */
DC_API dc_status dc_system_overdamp_warning(const dc_system* s, int* warn);

/* Derived couplings: gg = g_gamma0*a0 and gw = g_omega0*a0 (per length),
 * Gg = gg*x_zpf and Gw = gw*x_zpf (rate units). Null out-pointers skipped. */
DC_API dc_status dc_system_couplings(const dc_system* s,
                                     double* gg, double* gw,
                                     double* Gg, double* Gw);

typedef struct dc_noise {
  double laser_amp_excess;   /* classical excess PSD, port-1 amplitude, >= 0 */
  double laser_phase_excess; /* classical excess PSD, port-1 phase, >= 0 */
} dc_noise;

/* ------------------------------------------------------- linear response -- */

/* Output rows of the transfer matrix. */
enum {
  DC_OUT_X1 = 0,   /* reflected amplitude quadrature */
  DC_OUT_Y1 = 1,   /* reflected phase quadrature */
  DC_OUT_X2 = 2,   /* transmitted amplitude quadrature */
  DC_OUT_Y2 = 3,   /* transmitted phase quadrature */
  DC_OUT_POS = 4,  /* x / x_zpf */
  DC_OUT_FORCE = 5 /* F / hbar */
};
/* Input columns: port-1 and port-2 quadratures, then the thermal drive W. */
enum { DC_IN_X1 = 0, DC_IN_Y1 = 1, DC_IN_X2 = 2, DC_IN_Y2 = 3, DC_IN_W = 4 };

/* chi(omega) = 2*omega_m / (omega_m^2 - omega^2 - i*gamma_m*omega),
 * written as {Re, Im} into out[2]. */
DC_API dc_status dc_mech_susceptibility(const dc_system* s, double omega,
                                        double out[2]);

/* Effective susceptibility including the radiation loop; equals chi exactly
 * whenever g_omega0 = 0. */
DC_API dc_status dc_closed_loop_susceptibility(const dc_system* s, double omega,
                                               double out[2]);

/* Full 6x5 noise-input -> output transfer matrix at one frequency,
 * row-major, split into real and imaginary parts. */
DC_API dc_status dc_transfer_matrix(const dc_system* s, double omega,
                                    double re[30], double im[30]);

/* Symmetrized two-sided PSD of one output row. noise may be NULL (vacuum). */
DC_API dc_status dc_output_psd(const dc_system* s, const dc_noise* n,
                               double omega, int output_index, double* out);

/* PSD of the rotated port-1 quadrature cos(theta)*X_out1 + sin(theta)*Y_out1. */
DC_API dc_status dc_rotated_output_psd(const dc_system* s, const dc_noise* n,
                                       double omega, double theta, double* out);

/* --------------------------------------------------- measurement limits -- */

/* Equivalent displacement noise of the detected port, units of x^2 per rad/s.
 * Closed form at detuning = 0, g_omega0 = 0; otherwise taken from the engine
 * at the optimal homodyne angle. */
DC_API dc_status dc_imprecision_psd(const dc_system* s, double omega, double* out);

/* Quantum backaction force PSD on the pinned oscillator, units hbar^2. */
DC_API dc_status dc_backaction_psd(const dc_system* s, double omega, double* out);

typedef struct dc_product {
  double value_norm;  /* imprecision * backaction in units of hbar^2/4; >= 1 */
  double omega;
  double gamma_ratio; /* gamma2/gamma1 */
  double xi;          /* g_omega0/g_gamma0; +inf for pure dispersive */
} dc_product;

/* Backaction-imprecision product. Pure dissipative coupling: evaluated at
 * omega. Mixed coupling (xi != 0): requires gamma1 = gamma2 and reports the
 * zero-frequency value at the optimal homodyne angle. */
DC_API dc_status dc_ba_imp_product(const dc_system* s, double omega,
                                   dc_product* out);

/* Angle of the detected quadrature that carries all of the position signal,
 * in [0, pi). The orthogonal quadrature carries none. */
DC_API dc_status dc_optimal_homodyne_angle(const dc_system* s, double* out);

/* Coefficient of x in the transmitted amplitude quadrature (the part of the
 * signal lost to the undetected port), written as {Re, Im}. */
DC_API dc_status dc_wasted_information(const dc_system* s, double omega,
                                       double out[2]);

/* d/d(gamma2) of the classical amplitude transmittance
 * T = 2*sqrt(gamma1*gamma2)/(gamma1+gamma2); zero at gamma1 = gamma2. */
DC_API dc_status dc_transmittance_sensitivity(double gamma1, double gamma2,
                                              double* out);

/* -------------------------------------------------------------- squeezing -- */

typedef struct dc_squeezing_terms {
  double L;    /* 4*g1*g2/((g1+g2)^2 + 4 w^2), in (0,1] */
  double M;    /* 4*n_ba*gamma_m^2*|chi|^2*(n_th + n_ba + 1/2), >= 0 */
  double N;    /* 4*n_ba*gamma_m*Re chi */
  double n_ba; /* Gg^2/(gamma_m*gamma2) */
  double S0;   /* (n_th + 1/2)/(n_ba + n_th + 1/2) */
} dc_squeezing_terms;

DC_API dc_status dc_squeezing_terms_eval(const dc_system* s, double omega,
                                         dc_squeezing_terms* out);

/* Output-light quadrature PSD S_ZZ(omega, theta); closed form at detuning = 0,
 * g_omega0 = 0, engine path otherwise. */
DC_API dc_status dc_szz(const dc_system* s, double omega, double theta,
                        double* out);

/* Analytic minimum over theta: S_min = 1 + L*(M - sqrt(M^2+N^2))/2 at
 * theta_star in [0, pi). */
DC_API dc_status dc_optimal_quadrature(const dc_system* s, double omega,
                                       double* theta_star, double* s_min);

/* Narrow-band asymptotic minimum S0 + (1-S0)*(1-L); requires
 * 10 <= |omega_m-omega|/gamma_m <= min(n_th+n_ba, omega_m/gamma_m)/10. */
DC_API dc_status dc_asymptotic_min(const dc_system* s, double omega, double* out);

/* n_ba, the single-port equivalent n_ba1 = n_ba*(2w/gamma2)^2, and the ratio. */
DC_API dc_status dc_cooperativity(const dc_system* s, double omega,
                                  double* n_ba, double* n_ba1, double* ratio);

/* ------------------------------------------------ 1-D scattering cavity -- */

enum { DC_BRANCH_PLUS = +1, DC_BRANCH_MINUS = -1 };

typedef struct dc_scatter_config {
  double r0;      /* middle-mirror reflectivity at normal incidence, in (0,1) */
  double delta_r; /* tilt-induced reflectivity change, <= 0 */
  double tau;     /* input-mirror transmission, in [0,1) */
  double l;       /* sub-cavity length (middle mirror half way), > 0 */
  double c;       /* speed of light, > 0 */
  int branch;     /* DC_BRANCH_PLUS or DC_BRANCH_MINUS */
  int order;      /* longitudinal index n of the unperturbed resonance */
} dc_scatter_config;

typedef struct dc_scatter_result {
  double k_re, k_im;     /* complex resonance wavevector */
  double delta_omega_c;  /* c * Re(k - k_c) */
  double gamma_r;        /* decay of the tilt-only perturbation */
  double gamma_rho;      /* decay of the input-coupling-only perturbation */
  int perturbative_warn; /* 1 when |delta_r| > 0.1 or tau^2 > 0.1 */
} dc_scatter_result;

/* k_c = arccos(r0)/(2l) + pi*n/l, the root of cos(2 k l) = r0. */
DC_API dc_status dc_lossless_resonance(double r0, double l, int n, double* out);

DC_API dc_status dc_solve_resonance(const dc_scatter_config* cfg,
                                    dc_scatter_result* out);

/* First-order tilt response: delta_omega_c = (+/-) c*delta_r*t/(2l) by branch,
 * gamma_r = -c*delta_r*r0/l. */
DC_API dc_status dc_tilt_response(double r0, double t, double l, double c,
                                  double delta_r, int branch,
                                  double* delta_omega_c, double* gamma_r);

enum {
  DC_REGIME_SPREAD = 0,   /* t/r0 >> tau^2: mode spans both halves, c tau^2/(4l) */
  DC_REGIME_CONFINED = 1, /* t/r0 << tau^2: mode of the input half, c tau^2/(2l) */
  DC_REGIME_AMBIGUOUS = 2 /* within a factor 3: no asymptotic applies */
};

/* Input-port decay rate for delta_r = 0. Writes the full-solver value always;
 * asymptotic is NaN when no limit applies to the regime/branch, and the call
 * returns DC_ERR_AMBIGUOUS_REGIME (with general still valid) when the regime
 * separation is below a factor of 3. */
DC_API dc_status dc_input_port_decay(const dc_scatter_config* cfg,
                                     double* general, double* asymptotic,
                                     int* regime);

/* ------------------------------------------------------ stochastic check -- */

typedef struct dc_sim_config {
  double dt;       /* integrator step; must satisfy dt < 0.1/max(g1+g2, omega_m) */
  double duration; /* total simulated time; duration*gamma_m > 50 when the
                      mechanics contributes to any requested output */
  int n_segments;  /* Welch segments (50% overlap), >= 2 */
  uint64_t seed;
  int decimate;    /* block-mean decimation factor before the PSD, >= 1 */
} dc_sim_config;

typedef struct dc_psd_result dc_psd_result;

/* Time-domain simulation of the same linear model driven by white noise,
 * Welch-averaged into PSD estimates with standard errors. Deterministic for a
 * fixed seed. outputs[] lists transfer-matrix row indices. */
DC_API dc_status dc_simulate_psd(const dc_system* s, const dc_noise* n,
                                 const dc_sim_config* cfg, const int* outputs,
                                 int n_outputs, dc_psd_result** out);

DC_API void dc_psd_result_destroy(dc_psd_result* r);
DC_API dc_status dc_psd_result_bins(const dc_psd_result* r, size_t* n_bins);

/* Borrowed views, valid until the result is destroyed. output_slot indexes
 * the outputs[] array passed to dc_simulate_psd. */
DC_API dc_status dc_psd_result_view(const dc_psd_result* r, int output_slot,
                                    const double** omega, const double** psd,
                                    const double** se);

DC_API const char* dc_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DISSCAV_H */
