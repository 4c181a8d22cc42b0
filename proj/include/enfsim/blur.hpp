#pragma once

#include <optional>

#include "enfsim/frame.hpp"

namespace enfsim {

// 2-D Gaussian smoothing ahead of frame differencing; the kernel defaults to
// 21x21. sigma defaults to kernel_size/6 so the kernel edge sits at 3 sigma.
struct BlurParams {
  int kernel_size = 21;  // odd, >= 3
  std::optional<double> sigma_px;

  double sigma() const { return sigma_px ? *sigma_px : kernel_size / 6.0; }
  void validate() const;
};

// Normalized Gaussian-weighted sum over the kernel neighborhood, borders by
// edge replication. Kernel must fit inside the frame.
Frame gaussian_blur(const Frame& frame, const BlurParams& params);

}  // namespace enfsim
