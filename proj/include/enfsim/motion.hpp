#pragma once

#include <cstdint>

#include "enfsim/frame.hpp"

namespace enfsim {

// Indoor defaults from the attack write-up: a pixel changed means
// |delta| > 10 levels, motion means changed pixels > 0.5% of the frame.
// Both comparisons are strict.
struct MotionParams {
  double pixel_delta_threshold = 10.0;
  double changed_fraction_threshold = 0.005;

  void validate() const;
};

struct MotionResult {
  bool motion = false;
  std::int64_t changed_count = 0;
};

// Inputs are expected to be blurred already; dimensions must match.
MotionResult detect_motion(const Frame& prev, const Frame& cur, const MotionParams& params);

}  // namespace enfsim
