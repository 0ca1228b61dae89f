#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"
#include "linres.hpp"

namespace disscav {

// Real state-space form of the same linear model: state z = (X, Y, u, v) with
// u = x/x_zpf and v = u'/omega_m. Output rows follow transfer_matrix order;
// D carries the direct feed-through of the reflected inputs.
struct StateSpace {
  Eigen::Matrix4d A;
  Eigen::Matrix<double, 4, 5> B;
  Eigen::Matrix<double, 6, 4> C;
  Eigen::Matrix<double, 6, 5> D;
  Eigen::Matrix<double, 5, 1> sigma; // two-sided PSD of each white input
};

StateSpace state_space(const ValidatedSystem& s, const NoiseModel& noise);

// C (-i w I - A)^{-1} B + D: independent route to the same 6x5 response,
// used to cross-check the frequency-domain engine.
Eigen::Matrix<cplx, 6, 5> state_space_response(const StateSpace& ss,
                                               double omega);

struct SimConfig {
  double dt = 1e-3;         // integrator step
  double duration = 1e3;    // total simulated time
  int n_segments = 8;       // Welch segments at 50% overlap
  std::uint64_t seed = 1;
  int decimate = 1;         // block-mean decimation factor before the PSD
  std::vector<int> outputs; // transfer-matrix row indices; empty = all six
};

struct PsdEstimate {
  std::vector<int> outputs;             // slot -> transfer-matrix row
  std::vector<double> omega;            // shared frequency grid
  std::vector<std::vector<double>> psd; // [slot][bin]
  std::vector<std::vector<double>> se;  // [slot][bin]
};

// Time-domain stochastic check of the analytic spectra. The linear drift is
// propagated by its exact matrix exponential and the driving white noise is
// integrated exactly over each step (jointly with its bin average), so the
// estimate has no time-step bias; the initial state is drawn from the
// stationary distribution. Bit-identical for a fixed (seed, config, outputs).
PsdEstimate simulate_psd(const ValidatedSystem& s, const NoiseModel& noise,
                         const SimConfig& cfg);

} // namespace disscav
