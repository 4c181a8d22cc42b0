#include "enfsim/motion.hpp"

#include <cmath>
#include <stdexcept>

namespace enfsim {

void MotionParams::validate() const {
  if (!(pixel_delta_threshold > 0.0) || pixel_delta_threshold >= 255.0) {
    throw std::invalid_argument("MotionParams: pixel_delta_threshold must be in (0, 255)");
  }
  if (!(changed_fraction_threshold > 0.0) || changed_fraction_threshold >= 1.0) {
    throw std::invalid_argument("MotionParams: changed_fraction_threshold must be in (0, 1)");
  }
}

MotionResult detect_motion(const Frame& prev, const Frame& cur, const MotionParams& params) {
  params.validate();
  if (prev.width != cur.width || prev.height != cur.height) {
    throw std::invalid_argument("detect_motion: frame dimensions differ");
  }
  const float thr = static_cast<float>(params.pixel_delta_threshold);
  std::int64_t changed = 0;
  const std::size_t n = cur.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(cur.pixels[i] - prev.pixels[i]) > thr) ++changed;
  }
  MotionResult res;
  res.changed_count = changed;
  res.motion = static_cast<double>(changed) >
               params.changed_fraction_threshold * static_cast<double>(n);
  return res;
}

}  // namespace enfsim
