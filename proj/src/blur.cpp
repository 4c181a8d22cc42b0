#include "enfsim/blur.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace enfsim {

void BlurParams::validate() const {
  if (kernel_size < 3 || kernel_size % 2 == 0) {
    throw std::invalid_argument("BlurParams: kernel_size must be odd and >= 3");
  }
  if (!(sigma() > 0.0)) throw std::invalid_argument("BlurParams: sigma must be > 0");
}

Frame gaussian_blur(const Frame& frame, const BlurParams& params) {
  params.validate();
  const int k = params.kernel_size;
  if (k > frame.width || k > frame.height) {
    throw std::invalid_argument("gaussian_blur: kernel larger than frame");
  }

  // G(x,y) = exp(-(x^2+y^2)/(2 sigma^2)) / Z is separable; normalizing each
  // 1-D factor to sum 1 normalizes the 2-D kernel to sum 1.
  const int half = k / 2;
  const double s2 = 2.0 * params.sigma() * params.sigma();
  std::vector<double> taps(k);
  double sum = 0.0;
  for (int i = -half; i <= half; ++i) {
    taps[i + half] = std::exp(-(static_cast<double>(i) * i) / s2);
    sum += taps[i + half];
  }
  for (auto& t : taps) t /= sum;

  const int w = frame.width, h = frame.height;
  std::vector<float> tmp(frame.pixels.size());

  // horizontal pass, edge replication
  for (int r = 0; r < h; ++r) {
    const float* src = &frame.pixels[static_cast<std::size_t>(r) * w];
    float* dst = &tmp[static_cast<std::size_t>(r) * w];
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      if (c >= half && c + half < w) {
        for (int i = -half; i <= half; ++i) acc += taps[i + half] * src[c + i];
      } else {
        for (int i = -half; i <= half; ++i) acc += taps[i + half] * src[std::clamp(c + i, 0, w - 1)];
      }
      dst[c] = static_cast<float>(acc);
    }
  }

  Frame out = frame;
  // vertical pass
  for (int r = 0; r < h; ++r) {
    float* dst = &out.pixels[static_cast<std::size_t>(r) * w];
    if (r >= half && r + half < h) {
      for (int c = 0; c < w; ++c) {
        double acc = 0.0;
        for (int i = -half; i <= half; ++i) {
          acc += taps[i + half] * tmp[static_cast<std::size_t>(r + i) * w + c];
        }
        dst[c] = static_cast<float>(acc);
      }
    } else {
      for (int c = 0; c < w; ++c) {
        double acc = 0.0;
        for (int i = -half; i <= half; ++i) {
          const int rr = std::clamp(r + i, 0, h - 1);
          acc += taps[i + half] * tmp[static_cast<std::size_t>(rr) * w + c];
        }
        dst[c] = static_cast<float>(acc);
      }
    }
  }
  return out;
}

}  // namespace enfsim
