#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace enfsim {

// Declarative schedule of what happens in front of the camera. Times are
// seconds from stream start.

struct MotionInterval {
  double start_s = 0.0;
  double end_s = 0.0;
  int object_size_px = 48;          // width of the moving full-height bar
  double velocity_px_per_s = 240.0; // horizontal, wraps at the frame edge
};

struct LightToggle {
  double time_s = 0.0;
  double level = 200.0;  // 0..255
};

struct NoiseBurst {
  double start_s = 0.0;
  double end_s = 0.0;
  double amplitude = 0.5;  // 0..1, RMS of the band-limited burst
};

struct TriggerAppearance {
  double start_s = 0.0;
  double end_s = 0.0;
  int x_px = 16;
  int y_px = 16;
};

struct ManualTrigger {
  double time_s = 0.0;
};

struct SceneScript {
  double duration_s = 60.0;
  double initial_light_level = 200.0;  // 0..255
  std::vector<MotionInterval> motions;
  std::vector<LightToggle> light_toggles;
  std::vector<NoiseBurst> noise_bursts;
  std::vector<TriggerAppearance> triggers;
  std::vector<ManualTrigger> manual_triggers;

  void validate() const;  // throws std::invalid_argument
  double light_level_at(double t) const;
  bool any_motion_at(double t) const;
  bool trigger_visible_at(double t) const;
  bool manual_fired_between(double t0, double t1) const;

  nlohmann::json to_json() const;
  static SceneScript from_json(const nlohmann::json& j);
  static SceneScript load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

}  // namespace enfsim
