#include "enfsim/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "fft_backend.hpp"

namespace enfsim {

SpectrumBlock dft(std::span<const double> samples, double sample_rate_hz) {
  if (samples.empty()) throw std::invalid_argument("dft: empty input");
  SpectrumBlock block;
  block.n_samples = samples.size();
  block.sample_rate_hz = sample_rate_hz;
  block.bins = fftbk::real_dft(samples.data(), samples.size());
  return block;
}

std::vector<double> idft(const SpectrumBlock& spectrum) {
  if (spectrum.bins.empty()) throw std::invalid_argument("idft: empty spectrum");
  const auto out = fftbk::inverse_cdft(spectrum.bins.data(), spectrum.bins.size());
  std::vector<double> real(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) real[i] = out[i].real();
  return real;
}

std::vector<double> make_window(Window w, std::size_t n) {
  std::vector<double> win(n, 1.0);
  if (w == Window::hann && n > 1) {
    constexpr double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < n; ++i) {
      win[i] = 0.5 * (1.0 - std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
  }
  return win;
}

std::vector<StftFrame> stft(std::span<const double> samples, double sample_rate_hz,
                            double frame_len_s, double hop_s, Window window) {
  if (!(hop_s > 0.0) || frame_len_s < hop_s) {
    throw std::invalid_argument("stft: require frame_len >= hop > 0");
  }
  const auto frame_len = static_cast<std::size_t>(std::llround(frame_len_s * sample_rate_hz));
  if (frame_len == 0) throw std::invalid_argument("stft: frame shorter than one sample");

  std::vector<StftFrame> frames;
  if (samples.size() < frame_len) return frames;  // not an error

  const auto win = make_window(window, frame_len);
  std::vector<double> buf(frame_len);
  for (std::size_t i = 0;; ++i) {
    const auto start = static_cast<std::size_t>(
        std::llround(static_cast<double>(i) * hop_s * sample_rate_hz));
    if (start + frame_len > samples.size()) break;
    for (std::size_t j = 0; j < frame_len; ++j) buf[j] = samples[start + j] * win[j];
    StftFrame frame;
    frame.center_time_s = static_cast<double>(start) / sample_rate_hz + frame_len_s / 2.0;
    frame.spectrum = dft(buf, sample_rate_hz);
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace enfsim
