#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "enfsim/attack.hpp"
#include "enfsim/frame.hpp"
#include "enfsim/scene.hpp"

namespace enfsim {

// Per-frame / per-sample {live, replayed} ground truth, derived from the
// attack engine's event log. Acceptance tests score detections against this.
class LabelTrack {
 public:
  LabelTrack(std::vector<std::pair<double, double>> replay_intervals, CameraParams cam);

  bool time_replayed(double t) const;  // [start, end)
  bool frame_replayed(std::int64_t frame_index) const;
  bool sample_replayed(std::int64_t sample_index) const;
  std::int64_t replayed_frame_count(std::int64_t total_frames) const;
  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }

 private:
  std::vector<std::pair<double, double>> intervals_;
  CameraParams cam_;
};

LabelTrack ground_truth(const SceneScript& script, std::span<const AttackLogEvent> attack_timeline,
                        const CameraParams& cam);

}  // namespace enfsim
