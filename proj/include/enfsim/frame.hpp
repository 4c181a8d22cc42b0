#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace enfsim {

// Grayscale luminance grid. Pixels live in [0, 255] but stay float until a
// container write quantizes them (FSEQ stores 8-bit). Rows are exposed
// sequentially (rolling shutter): row r was sampled at
// timestamp_s + r * row_readout_s.
struct Frame {
  int width = 0;
  int height = 0;
  double timestamp_s = 0.0;
  double row_readout_s = 0.0;
  std::vector<float> pixels;  // row-major

  float& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * width + c]; }
  float at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * width + c]; }
  double row_time(int r) const { return timestamp_s + r * row_readout_s; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

// Mono PCM buffer; start_offset is the absolute sample index in the stream.
struct AudioBlock {
  double sample_rate_hz = 8000.0;
  std::int64_t start_offset = 0;
  std::vector<float> samples;  // [-1, 1]
};

struct HumHarmonic {
  int harmonic = 1;
  double amplitude = 1.0;  // relative to hum_amplitude
};

// Capture model shared by the renderers and the attack pipeline. Defaults are
// desk scale: 320x240 @ 30 fps video, 8 kHz audio.
struct CameraParams {
  int width = 320;
  int height = 240;
  std::uint32_t fps_num = 30;
  std::uint32_t fps_den = 1;
  // integer multiple of 1 ns so container round trips are exact; default
  // leaves a ~0.2 us idle gap per frame
  double row_readout_s = 138888e-9;
  double flicker_depth = 0.05;   // m, fraction of luminance at 2x grid freq
  double hum_amplitude = 0.1;    // audio full scale
  std::vector<HumHarmonic> hum_harmonics = {{1, 1.0}, {2, 0.3}};
  double video_noise_sigma = 2.0;   // luminance levels
  double audio_noise_sigma = 0.01;  // audio full scale
  double audio_sample_rate_hz = 8000.0;

  double fps() const { return static_cast<double>(fps_num) / fps_den; }
  double frame_period_s() const { return static_cast<double>(fps_den) / fps_num; }
  std::uint64_t frame_timestamp_ns(std::int64_t i) const {
    return static_cast<std::uint64_t>(i) * 1000000000ULL * fps_den / fps_num;
  }
  std::int64_t frame_first_sample(std::int64_t i) const {
    return static_cast<std::int64_t>(static_cast<double>(i) * audio_sample_rate_hz * fps_den / fps_num);
  }
  void validate() const;  // throws std::invalid_argument
};

// Pull-based single-consumer streams; renderers, container readers and the
// attack pipeline all speak these.
struct FrameSource {
  virtual ~FrameSource() = default;
  virtual std::optional<Frame> next() = 0;
};

struct AudioSource {
  virtual ~AudioSource() = default;
  virtual std::optional<AudioBlock> next() = 0;
};

// High-contrast checkerboard used as the visual trigger. Returned row-major,
// size x size, values lo/hi.
std::vector<float> make_fiducial(int size = 32, int tile_px = 4, float lo = 20.0f,
                                 float hi = 235.0f);

}  // namespace enfsim
