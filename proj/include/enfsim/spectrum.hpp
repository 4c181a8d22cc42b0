#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace enfsim {

// One block of DFT coefficients. bin k maps to frequency k*sample_rate/N;
// bins.size() == n_samples always.
struct SpectrumBlock {
  std::vector<std::complex<double>> bins;
  std::size_t n_samples = 0;
  double sample_rate_hz = 1.0;

  double bin_hz(std::size_t k) const {
    return static_cast<double>(k) * sample_rate_hz / static_cast<double>(n_samples);
  }
  // bin frequency folded into [0, Nyquist]
  double folded_bin_hz(std::size_t k) const {
    const std::size_t m = k <= n_samples - k ? k : n_samples - k;
    return static_cast<double>(m) * sample_rate_hz / static_cast<double>(n_samples);
  }
};

// A_k = sum_n exp(-j*2*pi*k*n/N) * a_n, all N bins. Fast under the hood but
// contractually equal to the defining sum.
SpectrumBlock dft(std::span<const double> samples, double sample_rate_hz = 1.0);

// Inverse transform, a_n = (1/N) * sum_k exp(+j*2*pi*k*n/N) * A_k, real part.
std::vector<double> idft(const SpectrumBlock& spectrum);

enum class Window { hann, rect };

std::vector<double> make_window(Window w, std::size_t n);

struct StftFrame {
  double center_time_s = 0.0;
  SpectrumBlock spectrum;
};

// Frame i covers samples starting at i*hop*sample_rate; the window is applied
// before the transform; center_time = frame start + frame_len/2. Returns an
// empty sequence when there are not enough samples for one frame.
std::vector<StftFrame> stft(std::span<const double> samples, double sample_rate_hz,
                            double frame_len_s, double hop_s, Window window);

}  // namespace enfsim
