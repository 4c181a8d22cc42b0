#pragma once

#include <optional>
#include <vector>

#include "enfsim/frame.hpp"

namespace enfsim {

// Visual trigger: normalized cross-correlation of every valid position
// against a fiducial template. One frame scoring above the threshold arms
// the attack.

struct Patch {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;  // row-major

  static Patch fiducial(int size = 32, int tile_px = 4);
};

struct TriggerParams {
  double ncc_threshold = 0.8;
  Patch templ = Patch::fiducial();

  void validate() const;
};

struct TemplateMatch {
  int x = 0;  // column of the template's top-left corner
  int y = 0;
  double ncc = 0.0;
};

// NCC at every valid position, row-major (height-th+1) x (width-tw+1).
// Positions whose local variance vanishes score 0.
std::vector<double> ncc_map(const Frame& image, const Patch& templ);

// Location of the maximum NCC if it exceeds the threshold; empty otherwise.
std::optional<TemplateMatch> detect_trigger(const Frame& frame, const Patch& templ,
                                            double ncc_threshold = 0.8);

}  // namespace enfsim
