#include "enfsim/render.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace enfsim {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
constexpr float kBarLuminance = 30.0f;

std::vector<float> make_pattern(int width) {
  // Column-only texture: smooth sweep plus two hard-edged strips. Every row
  // has the same mean, so per-frame mean removal cancels the scene exactly
  // and no frame-rate harmonic lands on the flicker tone.
  std::vector<float> p(width);
  for (int c = 0; c < width; ++c) {
    const double u = static_cast<double>(c) / width;
    p[c] = static_cast<float>(130.0 + 70.0 * std::sin(kTwoPi * (3.0 * u + 0.11)));
  }
  const int s1a = width * 15 / 100, s1b = width * 20 / 100;
  const int s2a = width * 60 / 100, s2b = width * 72 / 100;
  for (int c = s1a; c < s1b; ++c) p[c] = 225.0f;
  for (int c = s2a; c < s2b; ++c) p[c] = 45.0f;
  return p;
}

void require_coverage(const EnfSeries& enf, const SceneScript& script) {
  if (!enf.covers(0.0) || !enf.covers(script.duration_s)) {
    throw std::invalid_argument("renderer: ENF series does not cover [0, duration]");
  }
}

double wrap_position(double x, double span) {
  const double w = std::fmod(x, span);
  return w < 0.0 ? w + span : w;
}

}  // namespace

FrameRenderer::FrameRenderer(SceneScript script, const EnfSeries& enf, CameraParams cam,
                             std::uint64_t noise_seed)
    : script_(std::move(script)),
      cam_(std::move(cam)),
      phase_(enf),
      noise_(noise_seed),
      pattern_(make_pattern(cam_.width)),
      fiducial_(make_fiducial()) {
  script_.validate();
  cam_.validate();
  require_coverage(enf, script_);
  total_frames_ = std::llround(script_.duration_s * cam_.fps());
}

void FrameRenderer::paint_scene_row(double t_row, std::vector<float>& row) const {
  std::copy(pattern_.begin(), pattern_.end(), row.begin());
  for (const auto& m : script_.motions) {
    if (t_row < m.start_s || t_row >= m.end_s) continue;
    const double span = static_cast<double>(cam_.width + m.object_size_px);
    const double x0 = wrap_position(m.velocity_px_per_s * (t_row - m.start_s), span) - m.object_size_px;
    const int lo = std::max(0, static_cast<int>(std::floor(x0)));
    const int hi = std::min(cam_.width, static_cast<int>(std::floor(x0)) + m.object_size_px);
    for (int c = lo; c < hi; ++c) row[c] = kBarLuminance;
  }
}

std::optional<Frame> FrameRenderer::next() {
  if (next_frame_ >= total_frames_) return std::nullopt;
  const std::int64_t i = next_frame_++;

  Frame f;
  f.width = cam_.width;
  f.height = cam_.height;
  f.timestamp_s = static_cast<double>(cam_.frame_timestamp_ns(i)) * 1e-9;
  f.row_readout_s = cam_.row_readout_s;
  f.pixels.resize(f.pixel_count());

  const float m = static_cast<float>(cam_.flicker_depth);
  const float sigma = static_cast<float>(cam_.video_noise_sigma);
  std::vector<float> scene_row(cam_.width);

  for (int r = 0; r < cam_.height; ++r) {
    const double t_row = f.row_time(r);
    paint_scene_row(t_row, scene_row);

    // trigger fiducial sits on top of everything in its rows
    for (const auto& trig : script_.triggers) {
      if (t_row < trig.start_s || t_row >= trig.end_s) continue;
      if (r < trig.y_px || r >= trig.y_px + fiducial_size_) continue;
      const int lo = std::max(0, trig.x_px);
      const int hi = std::min(cam_.width, trig.x_px + fiducial_size_);
      const float* src = &fiducial_[static_cast<std::size_t>(r - trig.y_px) * fiducial_size_];
      for (int c = lo; c < hi; ++c) scene_row[c] = src[c - trig.x_px];
    }

    const float light = static_cast<float>(script_.light_level_at(t_row) / 255.0);
    const float flick = 1.0f + m * static_cast<float>(std::sin(2.0 * phase_.at(t_row)));
    const float row_gain = light * flick;

    float* dst = &f.pixels[static_cast<std::size_t>(r) * cam_.width];
    if (sigma > 0.0f) {
      for (int c = 0; c < cam_.width; ++c) {
        dst[c] = std::clamp(scene_row[c] * row_gain + sigma * noise_.gaussian_fast(), 0.0f, 255.0f);
      }
    } else {
      for (int c = 0; c < cam_.width; ++c) {
        dst[c] = std::clamp(scene_row[c] * row_gain, 0.0f, 255.0f);
      }
    }
  }
  return f;
}

Frame FrameRenderer::base_background(double t) const {
  Frame f;
  f.width = cam_.width;
  f.height = cam_.height;
  f.timestamp_s = t;
  f.row_readout_s = cam_.row_readout_s;
  f.pixels.resize(f.pixel_count());
  const float light = static_cast<float>(script_.light_level_at(t) / 255.0);
  for (int r = 0; r < cam_.height; ++r) {
    for (int c = 0; c < cam_.width; ++c) {
      f.at(r, c) = std::clamp(pattern_[c] * light, 0.0f, 255.0f);
    }
  }
  return f;
}

AudioRenderer::AudioRenderer(SceneScript script, const EnfSeries& enf, CameraParams cam,
                             std::uint64_t noise_seed)
    : script_(std::move(script)), cam_(std::move(cam)), phase_(enf), noise_(noise_seed ^ 0x9d2c5680u) {
  script_.validate();
  cam_.validate();
  require_coverage(enf, script_);
  total_frames_ = std::llround(script_.duration_s * cam_.fps());
  total_samples_ = std::llround(script_.duration_s * cam_.audio_sample_rate_hz);

  // Band-limited burst = equal-power comb of random-phase tones across
  // 400..3000 Hz; RMS equals the scripted amplitude exactly.
  constexpr int kTones = 32;
  constexpr double kBandLo = 400.0, kBandHi = 3000.0;
  std::uint64_t burst_idx = 0;
  for (const auto& b : script_.noise_bursts) {
    BurstTones t;
    t.start_s = b.start_s;
    t.end_s = b.end_s;
    t.scale = b.amplitude * std::sqrt(2.0 / kTones);
    Rng r(noise_seed ^ (0xb5297a4dULL + burst_idx++));
    for (int k = 0; k < kTones; ++k) {
      t.freq_hz.push_back(kBandLo + (k + 0.5) * (kBandHi - kBandLo) / kTones);
      t.phase0.push_back(kTwoPi * r.uniform());
    }
    bursts_.push_back(std::move(t));
  }
}

std::optional<AudioBlock> AudioRenderer::next() {
  if (next_frame_ >= total_frames_) return std::nullopt;
  const std::int64_t i = next_frame_++;

  AudioBlock block;
  block.sample_rate_hz = cam_.audio_sample_rate_hz;
  block.start_offset = cam_.frame_first_sample(i);
  std::int64_t end = cam_.frame_first_sample(i + 1);
  if (i + 1 == total_frames_) end = total_samples_;  // absorb any tail
  block.samples.resize(static_cast<std::size_t>(end - block.start_offset));

  const double sr = cam_.audio_sample_rate_hz;
  const double hum = cam_.hum_amplitude;
  for (std::size_t j = 0; j < block.samples.size(); ++j) {
    const double t = static_cast<double>(block.start_offset + static_cast<std::int64_t>(j)) / sr;
    const double ph = phase_.at(t);
    double v = 0.0;
    for (const auto& h : cam_.hum_harmonics) v += h.amplitude * std::sin(h.harmonic * ph);
    v *= hum;
    for (const auto& b : bursts_) {
      if (t < b.start_s || t >= b.end_s) continue;
      double acc = 0.0;
      for (std::size_t k = 0; k < b.freq_hz.size(); ++k) {
        acc += std::sin(kTwoPi * b.freq_hz[k] * t + b.phase0[k]);
      }
      v += b.scale * acc;
    }
    if (cam_.audio_noise_sigma > 0.0) v += cam_.audio_noise_sigma * noise_.gaussian_fast();
    block.samples[j] = static_cast<float>(std::clamp(v, -1.0, 1.0));
  }
  return block;
}

std::vector<Frame> render_all_frames(FrameRenderer& r) {
  std::vector<Frame> out;
  while (auto f = r.next()) out.push_back(std::move(*f));
  return out;
}

std::vector<AudioBlock> render_all_audio(AudioRenderer& r) {
  std::vector<AudioBlock> out;
  while (auto b = r.next()) out.push_back(std::move(*b));
  return out;
}

}  // namespace enfsim
