#ifndef DISSCAV_LINRES_HPP
#define DISSCAV_LINRES_HPP

#include <array>

#include "core.hpp"

namespace disscav {

// Row and column indices of the transfer matrix.
enum output_index : int {
  out_x1 = 0, // reflected amplitude quadrature
  out_y1 = 1, // reflected phase quadrature
  out_x2 = 2, // transmitted amplitude quadrature
  out_y2 = 3, // transmitted phase quadrature
  out_pos = 4,   // x / x_zpf
  out_force = 5, // F / hbar
  n_outputs = 6
};
enum input_index : int {
  in_x1 = 0,
  in_y1 = 1,
  in_x2 = 2,
  in_y2 = 3,
  in_w = 4, // thermal drive
  n_inputs = 5
};

// Complex response at one frequency: rows = outputs, columns = noise inputs.
// Entries satisfy T(-w) = conj(T(w)).
struct TransferMatrix {
  double omega = 0.0;
  std::array<std::array<cplx, n_inputs>, n_outputs> t{};
};

// chi(w) = 2*omega_m / (omega_m^2 - w^2 - i*gamma_m*w)
cplx mech_susceptibility(const ValidatedSystem& s, double omega);

// Effective susceptibility with the radiation loop closed
// (x -> cavity field -> force -> x). Identical to chi whenever gw = 0.
cplx closed_loop_susceptibility(const ValidatedSystem& s, double omega);

// Full closed-loop solve of the cavity + oscillator system.
TransferMatrix transfer_matrix(const ValidatedSystem& s, double omega);

// Two-sided input PSDs in column order: port-1 quadratures carry the
// classical excess on top of vacuum, port 2 is vacuum, W is n_th + 1/2.
std::array<double, n_inputs> input_psds(const ValidatedSystem& s,
                                        const NoiseModel& n);

// Symmetrized output PSD: sum over inputs of |T|^2 * S_in (cross spectra
// vanish for symmetrized vacuum inputs).
double output_psd(const ValidatedSystem& s, const NoiseModel& n, double omega,
                  int output);

// PSD of cos(theta)*X_outp + sin(theta)*Y_outp for port 1 or 2.
double rotated_output_psd(const ValidatedSystem& s, const NoiseModel& n,
                          double omega, double theta, int port = 1);

// Response with the oscillator pinned (x held fixed): `noise` maps the five
// inputs to the six outputs with u = 0; `signal_per_u` is each output's
// response to a unit displacement u = x/x_zpf with all noises off.
struct ClampedTransfer {
  double omega = 0.0;
  std::array<std::array<cplx, n_inputs>, n_outputs> noise{};
  std::array<cplx, n_outputs> signal_per_u{};
};

ClampedTransfer clamped_transfer(const ValidatedSystem& s, double omega);

} // namespace disscav

#endif
