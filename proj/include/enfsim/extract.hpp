#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "enfsim/enf.hpp"
#include "enfsim/frame.hpp"
#include "enfsim/spectrum.hpp"

namespace enfsim {

struct unsupported_configuration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// STFT peak tracking around one harmonic of the nominal. The band is
// [harmonic*nominal +/- halfwidth]; estimates divide back down by the
// harmonic, so the output is always in grid Hz.
struct ExtractionParams {
  double nominal_hz = 60.0;
  int harmonic = 1;                  // audio 1, video (flicker) 2
  double search_halfwidth_hz = 0.0;  // <= 0 means the default 0.1 * harmonic
  double stft_frame_s = 4.0;
  double stft_hop_s = 1.0;
  Window window = Window::hann;

  double halfwidth() const { return search_halfwidth_hz > 0.0 ? search_halfwidth_hz : 0.1 * harmonic; }
  double band_center_hz() const { return harmonic * nominal_hz; }
  void validate(double sample_rate_hz) const;  // empty/aliased band -> error
};

struct EnfSample {
  double time_s = 0.0;      // STFT frame center
  double value_hz = 0.0;    // grid Hz (already divided by harmonic)
  double confidence = 0.0;  // [0, 1]
  bool flagged = false;     // clamped to the band edge / no usable peak
};

// EnfSeries plus per-sample quality, the detector's input.
struct EstimatedEnf {
  EnfSeries series;
  std::vector<double> confidence;
  std::vector<std::uint8_t> flagged;

  std::size_t size() const { return series.values_hz.size(); }
  void push_back(const EnfSample& s);
};

// Streaming estimator: bounded memory (one STFT frame plus hop), emits each
// estimate as soon as the frame that ends it is buffered.
class EnfEstimator {
 public:
  EnfEstimator(ExtractionParams params, double sample_rate_hz, double start_time_s = 0.0);

  std::vector<EnfSample> push(std::span<const double> samples);
  const ExtractionParams& params() const { return params_; }

 private:
  EnfSample analyze(std::span<const double> frame) const;

  ExtractionParams params_;
  double sample_rate_hz_;
  double start_time_s_;
  std::size_t frame_len_;
  std::size_t hop_len_;
  std::vector<double> window_;
  std::vector<double> buf_;
  std::int64_t buf_start_ = 0;  // absolute sample index of buf_[0]
  std::int64_t next_frame_ = 0;
};

EstimatedEnf estimate_enf_audio(std::span<const AudioBlock> stream, const ExtractionParams& params);
EstimatedEnf estimate_enf_audio(std::span<const double> samples, double sample_rate_hz,
                                const ExtractionParams& params, double start_time_s = 0.0);

// Video path, push form: row-mean luminance ordered by exposure time,
// per-frame mean removed, resampled to the uniform row rate fps*height, then
// the audio pipeline at the flicker harmonic.
class VideoEnfEstimator {
 public:
  VideoEnfEstimator(const CameraParams& cam, const ExtractionParams& params);

  std::vector<EnfSample> push(const Frame& frame);

 private:
  EnfEstimator est_;
  double row_rate_hz_;
  bool have_prev_ = false;
  double prev_t_ = 0.0, prev_v_ = 0.0;
  std::int64_t next_grid_ = 0;
  std::vector<double> resampled_;
  std::vector<double> row_means_;
};

EstimatedEnf estimate_enf_video(FrameSource& frames, const CameraParams& cam,
                                const ExtractionParams& params);

// peak magnitude vs in-band floor, squashed to [0,1]
double peak_confidence(double peak_magnitude, double floor_mean_magnitude);

// signal_core CSV plus a confidence column
void write_extracted_csv(const std::filesystem::path& path, const EstimatedEnf& est);
EstimatedEnf read_extracted_csv(const std::filesystem::path& path);

}  // namespace enfsim
