#include "enfsim/labels.hpp"

#include <algorithm>

namespace enfsim {

LabelTrack::LabelTrack(std::vector<std::pair<double, double>> replay_intervals, CameraParams cam)
    : intervals_(std::move(replay_intervals)), cam_(std::move(cam)) {}

bool LabelTrack::time_replayed(double t) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [t](const auto& iv) { return t >= iv.first && t < iv.second; });
}

bool LabelTrack::frame_replayed(std::int64_t frame_index) const {
  return time_replayed(static_cast<double>(cam_.frame_timestamp_ns(frame_index)) * 1e-9);
}

bool LabelTrack::sample_replayed(std::int64_t sample_index) const {
  return time_replayed(static_cast<double>(sample_index) / cam_.audio_sample_rate_hz);
}

std::int64_t LabelTrack::replayed_frame_count(std::int64_t total_frames) const {
  std::int64_t n = 0;
  for (std::int64_t i = 0; i < total_frames; ++i) {
    if (frame_replayed(i)) ++n;
  }
  return n;
}

LabelTrack ground_truth(const SceneScript& script, std::span<const AttackLogEvent> attack_timeline,
                        const CameraParams& cam) {
  return LabelTrack(replay_intervals(attack_timeline, script.duration_s), cam);
}

}  // namespace enfsim
