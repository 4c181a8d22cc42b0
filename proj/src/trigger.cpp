#include "enfsim/trigger.hpp"

#include <cmath>
#include <stdexcept>

#include "fft_backend.hpp"

namespace enfsim {

Patch Patch::fiducial(int size, int tile_px) {
  Patch p;
  p.width = size;
  p.height = size;
  p.pixels = make_fiducial(size, tile_px);
  return p;
}

void TriggerParams::validate() const {
  if (ncc_threshold <= -1.0 || ncc_threshold >= 1.0) {
    throw std::invalid_argument("TriggerParams: ncc_threshold must be in (-1, 1)");
  }
  if (templ.width <= 0 || templ.height <= 0 ||
      templ.pixels.size() != static_cast<std::size_t>(templ.width) * templ.height) {
    throw std::invalid_argument("TriggerParams: malformed template");
  }
}

// Fast NCC: numerator by FFT cross-correlation against the mean-removed
// template, denominator from integral images. Equal to the direct
// formula at every valid position (the direct version is the test oracle).
std::vector<double> ncc_map(const Frame& image, const Patch& templ) {
  const int W = image.width, H = image.height;
  const int tw = templ.width, th = templ.height;
  if (tw > W || th > H) throw std::invalid_argument("ncc_map: template larger than image");
  const int out_w = W - tw + 1, out_h = H - th + 1;
  const std::size_t n_t = static_cast<std::size_t>(tw) * th;

  double t_mean = 0.0;
  for (float v : templ.pixels) t_mean += v;
  t_mean /= static_cast<double>(n_t);
  double st = 0.0;
  std::vector<double> tc(n_t);
  for (std::size_t i = 0; i < n_t; ++i) {
    tc[i] = templ.pixels[i] - t_mean;
    st += tc[i] * tc[i];
  }
  std::vector<double> out(static_cast<std::size_t>(out_w) * out_h, 0.0);
  if (st <= 1e-12) return out;  // constant template correlates with nothing

  // valid-mode correlation never wraps when the transform is image-sized
  const std::size_t pr = fftbk::next_fast_len(static_cast<std::size_t>(H));
  const std::size_t pc = fftbk::next_fast_len(static_cast<std::size_t>(W));
  std::vector<double> fpad(pr * pc, 0.0), tpad(pr * pc, 0.0);
  for (int r = 0; r < H; ++r) {
    for (int c = 0; c < W; ++c) fpad[static_cast<std::size_t>(r) * pc + c] = image.at(r, c);
  }
  for (int r = 0; r < th; ++r) {
    for (int c = 0; c < tw; ++c) tpad[static_cast<std::size_t>(r) * pc + c] = tc[static_cast<std::size_t>(r) * tw + c];
  }
  auto F = fftbk::real_dft_2d(fpad.data(), pr, pc);
  const auto T = fftbk::real_dft_2d(tpad.data(), pr, pc);
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= std::conj(T[i]);
  const auto corr = fftbk::inverse_real_dft_2d(F.data(), pr, pc);

  // integral images of f and f^2, one row/col of zero padding
  const std::size_t iw = static_cast<std::size_t>(W) + 1;
  std::vector<double> s1(iw * (H + 1), 0.0), s2(iw * (H + 1), 0.0);
  for (int r = 0; r < H; ++r) {
    double row1 = 0.0, row2 = 0.0;
    for (int c = 0; c < W; ++c) {
      const double v = image.at(r, c);
      row1 += v;
      row2 += v * v;
      s1[(r + 1) * iw + c + 1] = s1[r * iw + c + 1] + row1;
      s2[(r + 1) * iw + c + 1] = s2[r * iw + c + 1] + row2;
    }
  }

  const double nd = static_cast<double>(n_t);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      const double sum1 = s1[(y + th) * iw + (x + tw)] - s1[y * iw + (x + tw)] -
                          s1[(y + th) * iw + x] + s1[y * iw + x];
      const double sum2 = s2[(y + th) * iw + (x + tw)] - s2[y * iw + (x + tw)] -
                          s2[(y + th) * iw + x] + s2[y * iw + x];
      const double var_term = sum2 - sum1 * sum1 / nd;
      double ncc = 0.0;
      if (var_term > 1e-7 * nd) {
        ncc = corr[static_cast<std::size_t>(y) * pc + x] / std::sqrt(var_term * st);
        if (ncc > 1.0) ncc = 1.0;
        if (ncc < -1.0) ncc = -1.0;
      }
      out[static_cast<std::size_t>(y) * out_w + x] = ncc;
    }
  }
  return out;
}

std::optional<TemplateMatch> detect_trigger(const Frame& frame, const Patch& templ,
                                            double ncc_threshold) {
  const auto map = ncc_map(frame, templ);
  const int out_w = frame.width - templ.width + 1;
  std::size_t best = 0;
  for (std::size_t i = 1; i < map.size(); ++i) {
    if (map[i] > map[best]) best = i;
  }
  if (map.empty() || map[best] <= ncc_threshold) return std::nullopt;
  TemplateMatch m;
  m.x = static_cast<int>(best % out_w);
  m.y = static_cast<int>(best / out_w);
  m.ncc = map[best];
  return m;
}

}  // namespace enfsim
