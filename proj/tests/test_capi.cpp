// Exercises the shared library straight through the public C header: every
// check here goes via dc_* calls only, no internal headers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <disscav/disscav.h>

#include <cmath>
#include <cstring>
#include <string>

namespace {

dc_params base_params() {
  dc_params p;
  p.gamma1 = 1.0;
  p.gamma2 = 1.0;
  p.detuning = 0.0;
  p.g_gamma0 = 1.0;
  p.g_omega0 = 0.0;
  p.a0 = 1.0;
  p.omega_m = 1.0;
  p.gamma_m = 1e-3;
  p.n_th = 0.0;
  p.x_zpf = 1.0;
  return p;
}

struct SystemGuard {
  dc_system* s = nullptr;
  explicit SystemGuard(const dc_params& p) { REQUIRE(dc_system_create(&p, &s) == DC_OK); }
  ~SystemGuard() { dc_system_destroy(s); }
  SystemGuard(const SystemGuard&) = delete;
  SystemGuard& operator=(const SystemGuard&) = delete;
};

} // namespace

TEST_CASE("version and status names are stable strings") {
  CHECK(std::string(dc_version()) == "1.0.0");
  CHECK(std::string(dc_status_name(DC_OK)) == "Ok");
  CHECK(std::string(dc_status_name(DC_ERR_INVALID_ARG)) == "InvalidArg");
  CHECK(std::string(dc_status_name(DC_ERR_ZERO_SIGNAL)) == "ZeroSignalTransfer");
  CHECK(std::string(dc_status_name(DC_ERR_OUT_OF_BAND)) == "OutOfValidityBand");
  CHECK(std::string(dc_status_name(DC_ERR_AMBIGUOUS_REGIME)) == "AmbiguousRegime");
  CHECK(std::string(dc_status_name(DC_ERR_UNSTABLE)) == "UnstableSystem");
  CHECK(std::string(dc_status_name(static_cast<dc_status>(999))) == "Unknown");
}

TEST_CASE("system create validates and reports specific codes") {
  dc_system* s = nullptr;
  CHECK(dc_system_create(nullptr, &s) == DC_ERR_INVALID_ARG);

  dc_params p = base_params();
  CHECK(dc_system_create(&p, nullptr) == DC_ERR_INVALID_ARG);

  p.gamma1 = 0.0;
  CHECK(dc_system_create(&p, &s) == DC_ERR_NONPOSITIVE_RATE);
  p = base_params();
  p.gamma_m = 2.0; // >= omega_m
  CHECK(dc_system_create(&p, &s) == DC_ERR_OVERDAMPED);
  p = base_params();
  p.n_th = -0.5;
  CHECK(dc_system_create(&p, &s) == DC_ERR_NEGATIVE_OCCUPATION);
  p = base_params();
  p.a0 = -1.0;
  CHECK(dc_system_create(&p, &s) == DC_ERR_INVALID_ARG);
  p = base_params();
  p.detuning = std::nan("");
  CHECK(dc_system_create(&p, &s) == DC_ERR_INVALID_ARG);

  p = base_params();
  REQUIRE(dc_system_create(&p, &s) == DC_OK);
  REQUIRE(s != nullptr);
  dc_system_destroy(s);
  dc_system_destroy(nullptr); // must be a no-op
}

TEST_CASE("derived couplings and overdamp warning") {
  dc_params p = base_params();
  p.g_gamma0 = 0.3;
  p.g_omega0 = 0.4;
  p.a0 = 1.2;
  p.x_zpf = 2.0;
  SystemGuard g(p);

  double gg = 0, gw = 0, Gg = 0, Gw = 0;
  REQUIRE(dc_system_couplings(g.s, &gg, &gw, &Gg, &Gw) == DC_OK);
  CHECK(gg == doctest::Approx(0.36).epsilon(1e-15));
  CHECK(gw == doctest::Approx(0.48).epsilon(1e-15));
  CHECK(Gg == doctest::Approx(0.72).epsilon(1e-15));
  CHECK(Gw == doctest::Approx(0.96).epsilon(1e-15));
  // null out-pointers are skipped, not an error
  CHECK(dc_system_couplings(g.s, nullptr, nullptr, nullptr, nullptr) == DC_OK);
  CHECK(dc_system_couplings(nullptr, &gg, nullptr, nullptr, nullptr) ==
        DC_ERR_INVALID_ARG);

  int warn = -1;
  REQUIRE(dc_system_overdamp_warning(g.s, &warn) == DC_OK);
  CHECK(warn == 0); // gamma_m/omega_m = 1e-3

  dc_params q = base_params();
  q.gamma_m = 0.2;
  SystemGuard h(q);
  REQUIRE(dc_system_overdamp_warning(h.s, &warn) == DC_OK);
  CHECK(warn == 1);
}

TEST_CASE("mechanical and closed-loop susceptibility") {
  dc_params p = base_params();
  SystemGuard g(p);

  double chi[2] = {0, 0};
  REQUIRE(dc_mech_susceptibility(g.s, 0.0, chi) == DC_OK);
  CHECK(chi[0] == doctest::Approx(2.0).epsilon(1e-14)); // 2/omega_m at dc
  CHECK(std::abs(chi[1]) <= 1e-14);

  // pure dissipative coupling leaves the loop open
  double eff[2] = {0, 0};
  REQUIRE(dc_closed_loop_susceptibility(g.s, 0.7, eff) == DC_OK);
  REQUIRE(dc_mech_susceptibility(g.s, 0.7, chi) == DC_OK);
  CHECK(eff[0] == doctest::Approx(chi[0]).epsilon(1e-14));
  CHECK(eff[1] == doctest::Approx(chi[1]).epsilon(1e-14));

  CHECK(dc_mech_susceptibility(g.s, std::nan(""), chi) == DC_ERR_INVALID_ARG);
}

TEST_CASE("transfer matrix rows carry the expected entries") {
  dc_params p = base_params();
  p.gamma2 = 4.0;
  p.g_gamma0 = 0.5;
  SystemGuard g(p);

  double re[30], im[30];
  REQUIRE(dc_transfer_matrix(g.s, 0.3, re, im) == DC_OK);

  // force row: only the transmitted phase column at g_omega0 = 0,
  // value -gg/sqrt(gamma2), purely real
  const int row = DC_OUT_FORCE * 5;
  CHECK(re[row + DC_IN_Y2] == doctest::Approx(-0.5 / 2.0).epsilon(1e-14));
  CHECK(std::abs(im[row + DC_IN_Y2]) <= 1e-14);
  CHECK(std::abs(re[row + DC_IN_X1]) <= 1e-14);
  CHECK(std::abs(re[row + DC_IN_Y1]) <= 1e-14);
  CHECK(std::abs(re[row + DC_IN_X2]) <= 1e-14);

  CHECK(dc_transfer_matrix(g.s, 0.3, nullptr, im) == DC_ERR_INVALID_ARG);
}

TEST_CASE("output PSDs: vacuum floor and rotated quadrature") {
  dc_params p = base_params();
  p.g_gamma0 = 0.0; // dark cavity: every optical output sits on vacuum
  p.detuning = 0.4;
  SystemGuard g(p);

  for (int out = DC_OUT_X1; out <= DC_OUT_Y2; ++out) {
    double v = 0;
    REQUIRE(dc_output_psd(g.s, nullptr, 0.6, out, &v) == DC_OK);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  double v = 0;
  CHECK(dc_output_psd(g.s, nullptr, 0.6, 6, &v) == DC_ERR_UNKNOWN_OUTPUT);
  CHECK(dc_output_psd(g.s, nullptr, 0.6, -1, &v) == DC_ERR_UNKNOWN_OUTPUT);

  // theta = 0 must reproduce the amplitude output exactly
  dc_noise n;
  n.laser_amp_excess = 2.0;
  n.laser_phase_excess = 0.0;
  double direct = 0, rotated = 0;
  REQUIRE(dc_output_psd(g.s, &n, 0.6, DC_OUT_X1, &direct) == DC_OK);
  REQUIRE(dc_rotated_output_psd(g.s, &n, 0.6, 0.0, &rotated) == DC_OK);
  CHECK(rotated == doctest::Approx(direct).epsilon(1e-13));

  n.laser_amp_excess = -1.0;
  CHECK(dc_output_psd(g.s, &n, 0.6, DC_OUT_X1, &v) == DC_ERR_INVALID_ARG);
}

TEST_CASE("measurement limits through the C surface") {
  dc_params p = base_params();
  SystemGuard g(p);

  double imp = 0;
  REQUIRE(dc_imprecision_psd(g.s, 0.0, &imp) == DC_OK);
  CHECK(imp == doctest::Approx(0.25).epsilon(1e-12));

  double ba = 0;
  REQUIRE(dc_backaction_psd(g.s, 0.0, &ba) == DC_OK);
  CHECK(ba == doctest::Approx(1.0).epsilon(1e-12));

  dc_product prod;
  REQUIRE(dc_ba_imp_product(g.s, 0.0, &prod) == DC_OK);
  CHECK(prod.value_norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prod.gamma_ratio == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(prod.xi == 0.0);

  // mixed coupling on unequal ports is rejected
  dc_params q = base_params();
  q.gamma2 = 2.0;
  q.g_omega0 = 1.0;
  SystemGuard h(q);
  CHECK(dc_ba_imp_product(h.s, 0.0, &prod) == DC_ERR_INVALID_ARG);

  // mixed on matched ports: (1+2 xi^2)/(1+xi^2) = 1.5 at xi = 1
  dc_params m = base_params();
  m.g_omega0 = 1.0;
  SystemGuard gm(m);
  REQUIRE(dc_ba_imp_product(gm.s, 0.0, &prod) == DC_OK);
  CHECK(prod.value_norm == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(prod.xi == doctest::Approx(1.0).epsilon(1e-15));

  double theta = -1;
  REQUIRE(dc_optimal_homodyne_angle(gm.s, &theta) == DC_OK);
  CHECK(theta == doctest::Approx(std::atan(1.0)).epsilon(1e-14)); // pi/4

  dc_params dark = base_params();
  dark.g_gamma0 = 0.0;
  SystemGuard gd(dark);
  CHECK(dc_optimal_homodyne_angle(gd.s, &theta) == DC_ERR_NO_COUPLING);
  CHECK(dc_imprecision_psd(gd.s, 0.0, &imp) == DC_ERR_ZERO_SIGNAL);

  double w[2] = {-1, -1};
  REQUIRE(dc_wasted_information(g.s, 0.0, w) == DC_OK);
  CHECK(std::abs(w[0]) <= 1e-15); // matched ports lose nothing at dc
  CHECK(std::abs(w[1]) <= 1e-15);

  double slope = 0;
  REQUIRE(dc_transmittance_sensitivity(1.0, 4.0, &slope) == DC_OK);
  CHECK(slope == doctest::Approx(-0.06).epsilon(1e-13));
  REQUIRE(dc_transmittance_sensitivity(3.0, 3.0, &slope) == DC_OK);
  CHECK(std::abs(slope) <= 1e-15);
  CHECK(dc_transmittance_sensitivity(0.0, 3.0, &slope) == DC_ERR_NONPOSITIVE_RATE);
}

TEST_CASE("squeezing spectrum and its analytic minimum") {
  dc_params p = base_params();
  p.gamma1 = 1000.0;
  p.gamma2 = 1000.0;
  p.g_gamma0 = std::sqrt(10.0);
  p.gamma_m = 1e-2;
  SystemGuard g(p);

  dc_squeezing_terms t;
  REQUIRE(dc_squeezing_terms_eval(g.s, 1.0, &t) == DC_OK);
  CHECK(t.n_ba == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.L > 0.999);

  double szz = 0;
  REQUIRE(dc_szz(g.s, 1.0, 0.0, &szz) == DC_OK);
  CHECK(szz == doctest::Approx(24.999976000024).epsilon(1e-12));

  double theta_star = -1, s_min = -1;
  REQUIRE(dc_optimal_quadrature(g.s, 1.0, &theta_star, &s_min) == DC_OK);
  CHECK(theta_star >= 0.0);
  CHECK(theta_star < 3.14159265358979324);
  CHECK(s_min <= szz);
  double at_star = 0;
  REQUIRE(dc_szz(g.s, 1.0, theta_star, &at_star) == DC_OK);
  CHECK(at_star == doctest::Approx(s_min).epsilon(1e-12));

  // on resonance Re chi = 0, no squeezing below vacuum
  double on_res = 0, off_res = 0;
  double dummy;
  REQUIRE(dc_optimal_quadrature(g.s, 1.0, &dummy, &on_res) == DC_OK);
  // sqrt(M^2+N^2) with N = 0 loses a few ulps of a large M against M itself
  CHECK(on_res == doctest::Approx(1.0).epsilon(1e-7));
  REQUIRE(dc_optimal_quadrature(g.s, 1.05, &dummy, &off_res) == DC_OK);
  CHECK(off_res < 1.0);

  // asymptotic band gate
  double amin = 0;
  CHECK(dc_asymptotic_min(g.s, 1.0, &amin) == DC_ERR_OUT_OF_BAND);

  dc_params q = base_params();
  q.gamma1 = 5000.0;
  q.gamma2 = 5000.0;
  q.g_gamma0 = std::sqrt(50.0);
  q.gamma_m = 1e-6;
  q.n_th = 100.0;
  SystemGuard h(q);
  REQUIRE(dc_asymptotic_min(h.s, 1.0 + 1e-4, &amin) == DC_OK);
  CHECK(amin == doctest::Approx(0.00995004208504).epsilon(1e-9));

  double n_ba = 0, n_ba1 = 0, ratio = 0;
  dc_params c = base_params();
  c.gamma_m = 0.1;
  SystemGuard gc(c);
  REQUIRE(dc_cooperativity(gc.s, 0.5, &n_ba, &n_ba1, &ratio) == DC_OK);
  CHECK(n_ba == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(ratio == doctest::Approx(1.0).epsilon(1e-14)); // (2w/gamma2)^2 = 1
  CHECK(n_ba1 == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("scattering cavity resonances") {
  double kc = 0;
  REQUIRE(dc_lossless_resonance(0.0, 1.0, 0, &kc) == DC_OK);
  CHECK(kc == doctest::Approx(std::acos(0.0) / 2.0).epsilon(1e-15)); // pi/4
  CHECK(dc_lossless_resonance(1.0, 1.0, 0, &kc) == DC_ERR_INVALID_ARG);

  dc_scatter_config cfg;
  cfg.r0 = 0.8;
  cfg.delta_r = 0.0;
  cfg.tau = 0.0;
  cfg.l = 1.0;
  cfg.c = 1.0;
  cfg.branch = DC_BRANCH_PLUS;
  cfg.order = 2;

  dc_scatter_result res;
  REQUIRE(dc_solve_resonance(&cfg, &res) == DC_OK);
  REQUIRE(dc_lossless_resonance(0.8, 1.0, 2, &kc) == DC_OK);
  CHECK(res.k_re == doctest::Approx(kc).epsilon(1e-13));
  CHECK(std::abs(res.k_im) <= 1e-14);
  CHECK(std::abs(res.delta_omega_c) <= 1e-13);
  CHECK(res.perturbative_warn == 0);

  double dwc = 0, gr = 0;
  REQUIRE(dc_tilt_response(0.8, 0.6, 1.0, 1.0, -0.01, DC_BRANCH_PLUS, &dwc, &gr) ==
          DC_OK);
  CHECK(dwc == doctest::Approx(-0.003).epsilon(1e-15));
  CHECK(gr == doctest::Approx(0.008).epsilon(1e-15));
  REQUIRE(dc_tilt_response(0.8, 0.6, 1.0, 1.0, -0.01, DC_BRANCH_MINUS, &dwc, &gr) ==
          DC_OK);
  CHECK(dwc == doctest::Approx(0.003).epsilon(1e-15));

  // equal mode overlap between the halves: neither asymptotic limit applies,
  // but the full solve still lands
  dc_scatter_config amb = cfg;
  amb.tau = std::sqrt(0.75); // (t/r0)/tau^2 = 1
  double general = -1, asym = -1;
  int regime = -1;
  CHECK(dc_input_port_decay(&amb, &general, &asym, &regime) ==
        DC_ERR_AMBIGUOUS_REGIME);
  CHECK(regime == DC_REGIME_AMBIGUOUS);
  CHECK(general > 0.0);
  CHECK(std::isnan(asym));

  dc_scatter_config spread = cfg;
  spread.r0 = std::sqrt(0.75);
  spread.tau = 0.1;
  REQUIRE(dc_input_port_decay(&spread, &general, &asym, &regime) == DC_OK);
  CHECK(regime == DC_REGIME_SPREAD);
  CHECK(asym == doctest::Approx(0.0025).epsilon(1e-15)); // c tau^2/(4l)
  CHECK(general == doctest::Approx(asym).epsilon(0.05));

  dc_scatter_config bad = cfg;
  bad.delta_r = 0.5; // tilt can only reduce the reflectivity
  CHECK(dc_solve_resonance(&bad, &res) == DC_ERR_INVALID_ARG);
  CHECK(dc_solve_resonance(nullptr, &res) == DC_ERR_INVALID_ARG);
}

TEST_CASE("stochastic PSD check through the C surface") {
  dc_params p = base_params();
  p.g_gamma0 = 0.0; // dark: flat vacuum spectra, cheap to verify
  SystemGuard g(p);

  dc_sim_config cfg;
  cfg.dt = 0.04;
  cfg.duration = 1658.88; // 49 half-overlapped segments of 512 samples
  cfg.n_segments = 48;
  cfg.seed = 7;
  cfg.decimate = 2;

  const int outputs[2] = {DC_OUT_X1, DC_OUT_Y2};
  dc_psd_result* res = nullptr;
  REQUIRE(dc_simulate_psd(g.s, nullptr, &cfg, outputs, 2, &res) == DC_OK);
  REQUIRE(res != nullptr);

  size_t n_bins = 0;
  REQUIRE(dc_psd_result_bins(res, &n_bins) == DC_OK);
  CHECK(n_bins == 255);

  for (int slot = 0; slot < 2; ++slot) {
    const double* omega = nullptr;
    const double* psd = nullptr;
    const double* se = nullptr;
    REQUIRE(dc_psd_result_view(res, slot, &omega, &psd, &se) == DC_OK);
    REQUIRE(omega != nullptr);
    REQUIRE(psd != nullptr);
    REQUIRE(se != nullptr);
    CHECK(omega[0] > 0.0);
    CHECK(omega[n_bins - 1] > omega[0]);
    int outside = 0;
    for (size_t i = 0; i < n_bins; ++i) {
      CHECK(se[i] > 0.0);
      if (std::abs(psd[i] - 1.0) > 3.0 * se[i]) ++outside;
    }
    // 255 bins, a handful of 3 sigma excursions allowed
    CHECK(outside <= 12);
  }

  const double* omega = nullptr;
  CHECK(dc_psd_result_view(res, 2, &omega, nullptr, nullptr) ==
        DC_ERR_UNKNOWN_OUTPUT);
  CHECK(dc_psd_result_view(res, -1, &omega, nullptr, nullptr) ==
        DC_ERR_UNKNOWN_OUTPUT);

  // same seed reproduces bit-identical estimates
  dc_psd_result* res2 = nullptr;
  REQUIRE(dc_simulate_psd(g.s, nullptr, &cfg, outputs, 2, &res2) == DC_OK);
  const double* a = nullptr;
  const double* b = nullptr;
  REQUIRE(dc_psd_result_view(res, 0, nullptr, &a, nullptr) == DC_OK);
  REQUIRE(dc_psd_result_view(res2, 0, nullptr, &b, nullptr) == DC_OK);
  CHECK(std::memcmp(a, b, n_bins * sizeof(double)) == 0);
  dc_psd_result_destroy(res2);

  dc_sim_config bad = cfg;
  bad.dt = 0.5;
  dc_psd_result* r3 = nullptr;
  CHECK(dc_simulate_psd(g.s, nullptr, &bad, outputs, 2, &r3) == DC_ERR_RESOLUTION);
  const int bad_out[1] = {7};
  CHECK(dc_simulate_psd(g.s, nullptr, &cfg, bad_out, 1, &r3) ==
        DC_ERR_UNKNOWN_OUTPUT);
  CHECK(dc_simulate_psd(g.s, nullptr, &cfg, nullptr, 2, &r3) == DC_ERR_INVALID_ARG);

  dc_psd_result_destroy(res);
  dc_psd_result_destroy(nullptr); // must be a no-op
}
