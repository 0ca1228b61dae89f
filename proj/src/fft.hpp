#pragma once

#include <cstddef>
#include <vector>

#include "core.hpp"

namespace disscav {

// In-place radix-2 decimation-in-time FFT, forward sign e^{-i 2 pi k n / N}.
// Size must be a power of two.
void fft_pow2(std::vector<cplx>& a);

struct WelchEstimate {
  std::vector<double> omega; // angular frequency bins, DC and Nyquist excluded
  std::vector<double> psd;   // two-sided PSD estimate per bin
  std::vector<double> se;    // standard error per bin
  std::size_t seg_len = 0;   // samples per segment
  int n_segments = 0;
};

// Welch estimate with mean-removed Hann segments at 50% overlap. seg_len is
// chosen as the largest power of two with (n_segments+1)*seg_len/2 <= n;
// trailing samples beyond that span are ignored. The standard error comes
// from the spread across segments, inflated for the overlap correlation.
WelchEstimate welch_psd(const double* x, std::size_t n, double dt,
                        int n_segments);

} // namespace disscav
