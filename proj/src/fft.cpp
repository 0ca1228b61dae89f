#include "fft.hpp"

#include <cmath>
#include <numbers>

namespace disscav {

void fft_pow2(std::vector<cplx>& a) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    fail(errc::invalid_arg, "FFT size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

WelchEstimate welch_psd(const double* x, std::size_t n, double dt,
                        int n_segments) {
  if (x == nullptr) fail(errc::invalid_arg, "null sample buffer");
  if (!(dt > 0.0)) fail(errc::invalid_arg, "dt must be > 0");
  if (n_segments < 2) fail(errc::invalid_arg, "need at least 2 segments");

  // largest power-of-two segment length fitting K half-overlapped segments
  const std::size_t span = 2 * n / static_cast<std::size_t>(n_segments + 1);
  std::size_t N = 1;
  while (N * 2 <= span) N *= 2;
  if (N < 8) fail(errc::resolution_error, "too few samples per Welch segment");

  std::vector<double> w(N);
  double wsum2 = 0.0, wlap = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / N));
    wsum2 += w[i] * w[i];
  }
  for (std::size_t i = 0; i < N / 2; ++i) wlap += w[i] * w[i + N / 2];
  const double c = wlap / wsum2; // = 1/6 for the Hann window

  const std::size_t n_bins = N / 2 - 1; // DC and Nyquist excluded
  const int K = n_segments;
  std::vector<double> sum(n_bins, 0.0), sum2(n_bins, 0.0);
  std::vector<cplx> buf(N);

  for (int s = 0; s < K; ++s) {
    const double* seg = x + static_cast<std::size_t>(s) * (N / 2);
    double mean = 0.0;
    for (std::size_t i = 0; i < N; ++i) mean += seg[i];
    mean /= static_cast<double>(N);
    for (std::size_t i = 0; i < N; ++i) buf[i] = (seg[i] - mean) * w[i];
    fft_pow2(buf);
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double p = std::norm(buf[k + 1]) * dt / wsum2;
      sum[k] += p;
      sum2[k] += p * p;
    }
  }

  // overlapping segments are correlated; inflate the naive standard error by
  // the first-lag window correlation (exact for adjacent-only correlation)
  const double inflate =
      std::sqrt(1.0 + 2.0 * c * c * (1.0 - 1.0 / static_cast<double>(K)));

  WelchEstimate est;
  est.seg_len = N;
  est.n_segments = K;
  est.omega.resize(n_bins);
  est.psd.resize(n_bins);
  est.se.resize(n_bins);
  const double dw = 2.0 * std::numbers::pi / (static_cast<double>(N) * dt);
  for (std::size_t k = 0; k < n_bins; ++k) {
    const double m = sum[k] / K;
    const double var = std::max(0.0, (sum2[k] - K * m * m) / (K - 1));
    est.omega[k] = dw * static_cast<double>(k + 1);
    est.psd[k] = m;
    est.se[k] = std::sqrt(var / K) * inflate;
  }
  return est;
}

} // namespace disscav
