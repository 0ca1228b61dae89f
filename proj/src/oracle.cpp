#include "oracle.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "fft.hpp"

namespace disscav {

namespace {

// polar Box-Muller on top of mt19937_64; one spare cached between calls
struct NormalGen {
  std::mt19937_64 rng;
  double spare = 0.0;
  bool has_spare = false;

  explicit NormalGen(std::uint64_t seed) : rng(seed) {}

  double operator()() {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    double u, v, s;
    do {
      u = 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
      v = 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare = v * f;
    has_spare = true;
    return u * f;
  }
};

void gauss_legendre(int n, std::vector<double>& xg, std::vector<double>& wg) {
  xg.assign(n, 0.0);
  wg.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    xg[i] = -x;
    xg[n - 1 - i] = x;
    wg[i] = wg[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

// e^{Av} and K(v) = int_0^v e^{As} ds from one augmented exponential,
// valid for singular A as well
void drift_kernels(const Eigen::Matrix4d& A, double v, Eigen::Matrix4d& E,
                   Eigen::Matrix4d& K) {
  Eigen::Matrix<double, 8, 8> M = Eigen::Matrix<double, 8, 8>::Zero();
  M.topLeftCorner<4, 4>() = A * v;
  M.topRightCorner<4, 4>() = Eigen::Matrix4d::Identity() * v;
  const Eigen::Matrix<double, 8, 8> X = M.exp();
  E = X.topLeftCorner<4, 4>();
  K = X.topRightCorner<4, 4>();
}

Eigen::MatrixXd gaussian_factor(const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (cov + cov.transpose()));
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
}

} // namespace

StateSpace state_space(const ValidatedSystem& s, const NoiseModel& noise) {
  const NoiseModel nm = validate_noise(noise);
  const double g1 = s.p.gamma1, g2 = s.p.gamma2;
  const double sg1 = std::sqrt(g1), sg2 = std::sqrt(g2);
  const double gs = 0.5 * (g1 + g2);

  StateSpace ss;
  ss.A << -gs, -s.p.detuning, s.Gg, 0.0,
      s.p.detuning, -gs, s.Gw, 0.0,
      0.0, 0.0, 0.0, s.p.omega_m,
      4.0 * s.Gw, 0.0, -s.p.omega_m, -s.p.gamma_m;

  ss.B.setZero();
  ss.B(0, in_x1) = 0.5 * sg1;
  ss.B(0, in_x2) = 0.5 * sg2;
  ss.B(1, in_y1) = 0.5 * sg1;
  ss.B(1, in_y2) = 0.5 * sg2;
  ss.B(3, in_y2) = -2.0 * s.Gg / sg2;
  ss.B(3, in_w) = 2.0 * std::sqrt(s.p.gamma_m);

  ss.C.setZero();
  ss.C(out_x1, 0) = 2.0 * sg1;
  ss.C(out_y1, 1) = 2.0 * sg1;
  ss.C(out_x2, 0) = 2.0 * sg2;
  ss.C(out_x2, 2) = -2.0 * s.Gg / sg2;
  ss.C(out_y2, 1) = 2.0 * sg2;
  ss.C(out_pos, 2) = 1.0;
  ss.C(out_force, 0) = 2.0 * s.gw;

  ss.D.setZero();
  ss.D(out_x1, in_x1) = -1.0;
  ss.D(out_y1, in_y1) = -1.0;
  ss.D(out_x2, in_x2) = -1.0;
  ss.D(out_y2, in_y2) = -1.0;
  ss.D(out_force, in_y2) = -s.gg / sg2;

  ss.sigma << 1.0 + nm.laser_amp_excess, 1.0 + nm.laser_phase_excess, 1.0, 1.0,
      s.p.n_th + 0.5;
  return ss;
}

Eigen::Matrix<cplx, 6, 5> state_space_response(const StateSpace& ss,
                                               double omega) {
  Eigen::Matrix<cplx, 4, 4> lhs =
      cplx(0.0, -omega) * Eigen::Matrix<cplx, 4, 4>::Identity() -
      ss.A.cast<cplx>();
  Eigen::Matrix<cplx, 4, 5> sol =
      lhs.partialPivLu().solve(ss.B.cast<cplx>());
  return ss.C.cast<cplx>() * sol + ss.D.cast<cplx>();
}

PsdEstimate simulate_psd(const ValidatedSystem& s, const NoiseModel& noise,
                         const SimConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
    fail(errc::invalid_arg, "dt must be positive");
  if (!(cfg.duration > 0.0) || !std::isfinite(cfg.duration))
    fail(errc::invalid_arg, "duration must be positive");
  if (cfg.n_segments < 2) fail(errc::invalid_arg, "need at least 2 segments");
  if (cfg.decimate < 1) fail(errc::invalid_arg, "decimate must be >= 1");

  std::vector<int> slots = cfg.outputs;
  if (slots.empty())
    slots = {out_x1, out_y1, out_x2, out_y2, out_pos, out_force};
  for (int idx : slots)
    if (idx < 0 || idx >= n_outputs)
      fail(errc::unknown_output_index, "output index out of range");
  const int ns = static_cast<int>(slots.size());

  const StateSpace ss = state_space(s, noise);

  // closed-loop poles must sit strictly in the left half-plane
  const Eigen::EigenSolver<Eigen::Matrix4d> poles(ss.A);
  const double margin = 1e-12 * std::max(1.0, ss.A.norm());
  if (poles.eigenvalues().real().maxCoeff() > -margin)
    fail(errc::unstable_system, "closed-loop pole in the right half-plane");

  // the step must resolve the fastest rate, and mechanical spectra need
  // enough line averaging
  if (cfg.dt >= 0.1 / std::max(s.p.gamma1 + s.p.gamma2, s.p.omega_m))
    fail(errc::resolution_error, "dt too coarse for the cavity dynamics");
  bool mechanics = s.Gg != 0.0 || s.Gw != 0.0;
  for (int idx : slots) mechanics = mechanics || idx == out_pos;
  if (mechanics && cfg.duration * s.p.gamma_m <= 50.0)
    fail(errc::resolution_error,
         "duration too short to average the mechanical line");

  const double h = cfg.dt;
  const Eigen::Matrix<double, 5, 5> Sig = ss.sigma.asDiagonal();
  const Eigen::Matrix4d BSB = ss.B * Sig * ss.B.transpose();

  Eigen::Matrix4d Ad, Kh;
  drift_kernels(ss.A, h, Ad, Kh);
  const Eigen::Matrix4d Phibar = Kh / h;

  // second moments of (eta, zeta, xibar): the state increment, the bin
  // average of the noise-driven state response, and the bin-averaged input
  std::vector<double> xg, wg;
  gauss_legendre(64, xg, wg);
  Eigen::Matrix4d Q = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d Cez = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d Czz = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d K2 = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 64; ++i) {
    const double v = 0.5 * h * (xg[i] + 1.0);
    const double w = 0.5 * h * wg[i];
    Eigen::Matrix4d Ev, Kv;
    drift_kernels(ss.A, v, Ev, Kv);
    Q += w * Ev * BSB * Ev.transpose();
    Cez += w * Ev * BSB * Kv.transpose() / h;
    Czz += w * Kv * BSB * Kv.transpose() / (h * h);
    K2 += w * Kv;
  }
  const Eigen::Matrix<double, 4, 5> Cex = Kh * ss.B * Sig / h;
  const Eigen::Matrix<double, 4, 5> Czx = K2 * ss.B * Sig / (h * h);

  Eigen::Matrix<double, 13, 13> J;
  J.setZero();
  J.block<4, 4>(0, 0) = Q;
  J.block<4, 4>(0, 4) = Cez;
  J.block<4, 4>(4, 0) = Cez.transpose();
  J.block<4, 4>(4, 4) = Czz;
  J.block<4, 5>(0, 8) = Cex;
  J.block<5, 4>(8, 0) = Cex.transpose();
  J.block<4, 5>(4, 8) = Czx;
  J.block<5, 4>(8, 4) = Czx.transpose();
  J.block<5, 5>(8, 8) = Sig / h;

  // the run only ever consumes eta and, per requested output, the scalar
  // feed C*zeta + D*xibar: project the joint onto those functionals and
  // draw it directly in 4+ns dimensions
  Eigen::MatrixXd P(4 + ns, 13);
  P.setZero();
  P.block<4, 4>(0, 0) = Eigen::Matrix4d::Identity();
  for (int j = 0; j < ns; ++j) {
    P.block<1, 4>(4 + j, 4) = ss.C.row(slots[j]);
    P.block<1, 5>(4 + j, 8) = ss.D.row(slots[j]);
  }
  const Eigen::MatrixXd L = gaussian_factor(P * J * P.transpose());

  // stationary initial state from the discrete Lyapunov equation
  const Eigen::Matrix<double, 16, 16> kron = Eigen::kroneckerProduct(Ad, Ad);
  const Eigen::Matrix<double, 16, 16> lyap =
      Eigen::Matrix<double, 16, 16>::Identity() - kron;
  const Eigen::Map<const Eigen::Matrix<double, 16, 1>> qvec(Q.data());
  const Eigen::Matrix<double, 16, 1> pvec = lyap.partialPivLu().solve(qvec);
  const Eigen::Matrix4d Pinf =
      Eigen::Map<const Eigen::Matrix4d>(pvec.data());
  const Eigen::MatrixXd Lp = gaussian_factor(Pinf);

  // round, not truncate: duration is usually written as n*dt and must not
  // lose a step to the last ulp of the division
  const auto n_raw =
      static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt));
  const std::size_t m = static_cast<std::size_t>(cfg.decimate);
  const std::size_t n_dec = n_raw / m;
  if (n_dec < 16) fail(errc::resolution_error, "too few samples for a PSD");

  Eigen::MatrixXd rows(ns, 4); // per-slot deterministic part C*Phibar
  for (int j = 0; j < ns; ++j) rows.row(j) = ss.C.row(slots[j]) * Phibar;

  NormalGen normal(cfg.seed);
  Eigen::Vector4d z;
  {
    Eigen::Vector4d g0;
    for (int i = 0; i < 4; ++i) g0[i] = normal();
    z = Lp * g0;
  }

  std::vector<std::vector<double>> series(ns);
  for (auto& v : series) v.resize(n_dec);
  Eigen::VectorXd g(4 + ns), p(4 + ns);
  std::vector<double> acc(ns, 0.0);

  for (std::size_t k = 0; k < n_dec; ++k) {
    for (int j = 0; j < ns; ++j) acc[j] = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      for (int i = 0; i < 4 + ns; ++i) g[i] = normal();
      p.noalias() = L * g;
      for (int j = 0; j < ns; ++j)
        acc[j] += rows.row(j).dot(z) + p[4 + j];
      z = Ad * z + p.head<4>();
    }
    const double inv = 1.0 / static_cast<double>(m);
    for (int j = 0; j < ns; ++j) series[j][k] = acc[j] * inv;
  }

  PsdEstimate est;
  est.outputs = slots;
  est.psd.resize(ns);
  est.se.resize(ns);
  const double dts = cfg.dt * static_cast<double>(m);
  for (int j = 0; j < ns; ++j) {
    WelchEstimate w =
        welch_psd(series[j].data(), n_dec, dts, cfg.n_segments);
    if (j == 0) est.omega = std::move(w.omega);
    est.psd[j] = std::move(w.psd);
    est.se[j] = std::move(w.se);
  }
  return est;
}

} // namespace disscav
