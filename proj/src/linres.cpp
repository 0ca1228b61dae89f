#include "linres.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace disscav {

namespace {

using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;
using Mat25 = Eigen::Matrix<cplx, 2, 5>;
using Mat35 = Eigen::Matrix<cplx, 3, 5>;

// Noise drive of the intracavity quadratures and the oscillator.
// Unknown order: (X, Y, u); input order as in input_index.
Mat35 drive_matrix(const ValidatedSystem& s) {
  const double sg1 = std::sqrt(s.p.gamma1);
  const double sg2 = std::sqrt(s.p.gamma2);
  Mat35 B = Mat35::Zero();
  B(0, in_x1) = sg1 / 2.0;
  B(0, in_x2) = sg2 / 2.0;
  B(1, in_y1) = sg1 / 2.0;
  B(1, in_y2) = sg2 / 2.0;
  B(2, in_y2) = -s.Gg / sg2; // loss-port vacuum kicks the oscillator
  B(2, in_w) = std::sqrt(s.p.gamma_m);
  return B;
}

} // namespace

cplx mech_susceptibility(const ValidatedSystem& s, double omega) {
  const double wm = s.p.omega_m;
  return 2.0 * wm / cplx(wm * wm - omega * omega, -s.p.gamma_m * omega);
}

cplx closed_loop_susceptibility(const ValidatedSystem& s, double omega) {
  const cplx chi = mech_susceptibility(s, omega);
  const cplx D((s.p.gamma1 + s.p.gamma2) / 2.0, -omega);
  const double Det = s.p.detuning;
  // Eliminating the cavity block shifts chi^-1 by the radiation loop gain;
  // the shift carries an overall factor Gw, so gw = 0 decouples exactly.
  const cplx shift =
      2.0 * s.Gw * (D * s.Gg - Det * s.Gw) / (D * D + Det * Det);
  return 1.0 / (1.0 / chi - shift);
}

TransferMatrix transfer_matrix(const ValidatedSystem& s, double omega) {
  const double g1 = s.p.gamma1, g2 = s.p.gamma2, Det = s.p.detuning;
  const double sg1 = std::sqrt(g1), sg2 = std::sqrt(g2);
  const cplx D((g1 + g2) / 2.0, -omega);
  const cplx chi_inv = 1.0 / mech_susceptibility(s, omega);

  Mat3 A;
  A << D, Det, -s.Gg,
      -Det, D, -s.Gw,
      -2.0 * s.Gw, 0.0, chi_inv;
  Eigen::PartialPivLU<Mat3> lu(A);
  // The closed-loop determinant stays away from zero on the real axis for
  // positive rates; a vanishing pivot would mean a genuinely singular input.
  if (!std::isfinite(std::abs(lu.determinant())) ||
      std::abs(lu.determinant()) == 0.0)
    fail(errc::singular_system, "response matrix is singular");
  const Mat35 S = lu.solve(drive_matrix(s));

  TransferMatrix T;
  T.omega = omega;
  for (int j = 0; j < n_inputs; ++j) {
    T.t[out_x1][j] = 2.0 * sg1 * S(0, j);
    T.t[out_y1][j] = 2.0 * sg1 * S(1, j);
    T.t[out_x2][j] = 2.0 * sg2 * S(0, j) - (2.0 * s.Gg / sg2) * S(2, j);
    T.t[out_y2][j] = 2.0 * sg2 * S(1, j);
    T.t[out_pos][j] = S(2, j);
    T.t[out_force][j] = 2.0 * s.gw * S(0, j);
  }
  // reflected/transmitted fields interfere with the incoming ones
  T.t[out_x1][in_x1] -= 1.0;
  T.t[out_y1][in_y1] -= 1.0;
  T.t[out_x2][in_x2] -= 1.0;
  T.t[out_y2][in_y2] -= 1.0;
  // direct loss-port contribution to the force
  T.t[out_force][in_y2] -= s.gg / sg2;
  return T;
}

std::array<double, n_inputs> input_psds(const ValidatedSystem& s,
                                        const NoiseModel& n) {
  return {1.0 + n.laser_amp_excess, 1.0 + n.laser_phase_excess, 1.0, 1.0,
          s.p.n_th + 0.5};
}

double output_psd(const ValidatedSystem& s, const NoiseModel& n, double omega,
                  int output) {
  if (output < 0 || output >= n_outputs)
    fail(errc::unknown_output_index, "output index not in [0,6)");
  const TransferMatrix T = transfer_matrix(s, omega);
  const auto S_in = input_psds(s, n);
  double acc = 0.0;
  for (int j = 0; j < n_inputs; ++j) acc += std::norm(T.t[output][j]) * S_in[j];
  return acc;
}

double rotated_output_psd(const ValidatedSystem& s, const NoiseModel& n,
                          double omega, double theta, int port) {
  if (port != 1 && port != 2) fail(errc::invalid_arg, "port must be 1 or 2");
  const TransferMatrix T = transfer_matrix(s, omega);
  const auto S_in = input_psds(s, n);
  const int rx = port == 1 ? out_x1 : out_x2;
  const int ry = port == 1 ? out_y1 : out_y2;
  const double ct = std::cos(theta), st = std::sin(theta);
  double acc = 0.0;
  for (int j = 0; j < n_inputs; ++j)
    acc += std::norm(ct * T.t[rx][j] + st * T.t[ry][j]) * S_in[j];
  return acc;
}

ClampedTransfer clamped_transfer(const ValidatedSystem& s, double omega) {
  const double g1 = s.p.gamma1, g2 = s.p.gamma2, Det = s.p.detuning;
  const double sg1 = std::sqrt(g1), sg2 = std::sqrt(g2);
  const cplx D((g1 + g2) / 2.0, -omega);

  Mat2 C2;
  C2 << D, Det, -Det, D;
  Eigen::PartialPivLU<Mat2> lu(C2);

  Mat25 B2 = Mat25::Zero();
  B2(0, in_x1) = sg1 / 2.0;
  B2(0, in_x2) = sg2 / 2.0;
  B2(1, in_y1) = sg1 / 2.0;
  B2(1, in_y2) = sg2 / 2.0;
  const Mat25 S2 = lu.solve(B2);
  const Eigen::Vector2cd sig =
      lu.solve(Eigen::Vector2cd(cplx(s.Gg, 0.0), cplx(s.Gw, 0.0)));

  ClampedTransfer out;
  out.omega = omega;
  for (int j = 0; j < n_inputs; ++j) {
    out.noise[out_x1][j] = 2.0 * sg1 * S2(0, j);
    out.noise[out_y1][j] = 2.0 * sg1 * S2(1, j);
    out.noise[out_x2][j] = 2.0 * sg2 * S2(0, j);
    out.noise[out_y2][j] = 2.0 * sg2 * S2(1, j);
    out.noise[out_pos][j] = 0.0;
    out.noise[out_force][j] = 2.0 * s.gw * S2(0, j);
  }
  out.noise[out_x1][in_x1] -= 1.0;
  out.noise[out_y1][in_y1] -= 1.0;
  out.noise[out_x2][in_x2] -= 1.0;
  out.noise[out_y2][in_y2] -= 1.0;
  out.noise[out_force][in_y2] -= s.gg / sg2;

  out.signal_per_u[out_x1] = 2.0 * sg1 * sig(0);
  out.signal_per_u[out_y1] = 2.0 * sg1 * sig(1);
  out.signal_per_u[out_x2] = 2.0 * sg2 * sig(0) - 2.0 * s.Gg / sg2;
  out.signal_per_u[out_y2] = 2.0 * sg2 * sig(1);
  out.signal_per_u[out_pos] = 1.0;
  out.signal_per_u[out_force] = 2.0 * s.gw * sig(0);
  return out;
}

} // namespace disscav
