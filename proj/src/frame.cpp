#include "enfsim/frame.hpp"

#include <stdexcept>

namespace enfsim {

void CameraParams::validate() const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("CameraParams: dimensions must be positive");
  if (fps_num == 0 || fps_den == 0) throw std::invalid_argument("CameraParams: fps must be positive");
  if (!(row_readout_s > 0.0)) throw std::invalid_argument("CameraParams: row_readout must be positive");
  if (height * row_readout_s > frame_period_s() + 1e-12) {
    throw std::invalid_argument("CameraParams: rows do not fit in the frame interval");
  }
  if (flicker_depth < 0.0 || flicker_depth >= 1.0) {
    throw std::invalid_argument("CameraParams: flicker_depth must be in [0, 1)");
  }
  if (hum_amplitude < 0.0 || hum_amplitude > 1.0) {
    throw std::invalid_argument("CameraParams: hum_amplitude must be in [0, 1]");
  }
  if (!(audio_sample_rate_hz > 0.0)) {
    throw std::invalid_argument("CameraParams: audio_sample_rate must be positive");
  }
  for (const auto& h : hum_harmonics) {
    if (h.harmonic < 1) throw std::invalid_argument("CameraParams: harmonic indices start at 1");
  }
}

std::vector<float> make_fiducial(int size, int tile_px, float lo, float hi) {
  std::vector<float> patch(static_cast<std::size_t>(size) * size);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      const bool dark = ((r / tile_px) + (c / tile_px)) % 2 == 0;
      patch[static_cast<std::size_t>(r) * size + c] = dark ? lo : hi;
    }
  }
  return patch;
}

}  // namespace enfsim
