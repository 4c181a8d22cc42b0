#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "enfsim/enf.hpp"
#include "enfsim/frame.hpp"
#include "enfsim/rng.hpp"
#include "enfsim/scene.hpp"

namespace enfsim {

// Synthesizes the live camera feed. Each pixel is
//   scene(r,c,t_r) * (1 + m*sin(2*phase(t_r))) + N(0, sigma)
// with t_r the rolling-shutter exposure time of row r; the factor 2 puts the
// light flicker at twice the grid frequency. scene() composites the static
// background, the scripted moving bar, the scripted light level and the
// trigger fiducial.
class FrameRenderer final : public FrameSource {
 public:
  FrameRenderer(SceneScript script, const EnfSeries& enf, CameraParams cam,
                std::uint64_t noise_seed);

  std::optional<Frame> next() override;
  std::int64_t total_frames() const { return total_frames_; }
  // background as it appears with m = 0, no events, zero noise, at frame time t
  Frame base_background(double t = 0.0) const;

 private:
  void paint_scene_row(double t_row, std::vector<float>& row) const;

  SceneScript script_;
  CameraParams cam_;
  CumulativePhase phase_;
  Rng noise_;
  std::vector<float> pattern_;  // one row; the background is column-only
  std::vector<float> fiducial_;
  int fiducial_size_ = 32;
  std::int64_t total_frames_ = 0;
  std::int64_t next_frame_ = 0;
};

// Mains hum plus scripted band-limited noise bursts plus a white noise floor:
//   sample(t) = hum_amplitude * sum_h amp_h*sin(h*phase(t)) + bursts + floor
// Emits one block per video frame period so the attack pipeline can consume
// both streams in lockstep.
class AudioRenderer final : public AudioSource {
 public:
  AudioRenderer(SceneScript script, const EnfSeries& enf, CameraParams cam,
                std::uint64_t noise_seed);

  std::optional<AudioBlock> next() override;
  std::int64_t total_samples() const { return total_samples_; }

 private:
  struct BurstTones {
    double start_s, end_s, scale;
    std::vector<double> freq_hz;
    std::vector<double> phase0;
  };

  SceneScript script_;
  CameraParams cam_;
  CumulativePhase phase_;
  Rng noise_;
  std::vector<BurstTones> bursts_;
  std::int64_t total_frames_ = 0;
  std::int64_t total_samples_ = 0;
  std::int64_t next_frame_ = 0;
};

// Drains a source into memory; test and small-run convenience.
std::vector<Frame> render_all_frames(FrameRenderer& r);
std::vector<AudioBlock> render_all_audio(AudioRenderer& r);

}  // namespace enfsim
