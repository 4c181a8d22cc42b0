#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "enfsim/frame.hpp"

namespace enfsim {

// Audio-side gate: DFT the block, drop DC and a +/-1 Hz guard band around
// each hum harmonic, then compare the mean normalized magnitude (2/N * |A_k|)
// of the remaining bins against a threshold. Threshold default was calibrated
// as 3x the quiet-segment mean on default synthesis (hum 0.1, floor 0.01).
struct NoiseGateParams {
  double threshold = 2.3e-3;
  double nominal_hz = 60.0;
  std::vector<int> hum_harmonics = {1, 2};
  double guard_hz = 1.0;
  std::size_t block_len = 2048;  // 0.25 s at 8 kHz

  void validate() const;
};

// Mean normalized magnitude over the retained bins; what the gate thresholds.
double noise_gate_level(const AudioBlock& block, const NoiseGateParams& params);

// true iff the block is "noisy". Blocks shorter than 256 samples are rejected.
bool detect_audio_noise(const AudioBlock& block, const NoiseGateParams& params);

// Streaming wrapper: accepts arbitrary sample runs, gates them in
// block_len-sized chunks, and reports how far the stream has been verified.
class AudioGate {
 public:
  AudioGate(NoiseGateParams params, double sample_rate_hz);

  struct BlockVerdict {
    std::int64_t end_sample = 0;  // exclusive
    bool noisy = false;
  };

  // Returns verdicts of any blocks completed by this push.
  std::vector<BlockVerdict> push(std::span<const float> samples);
  // Gates whatever remains (if it is at least 256 samples; otherwise the tail
  // inherits the last verdict). Call once at stream end.
  std::vector<BlockVerdict> flush();

 private:
  NoiseGateParams params_;
  double sample_rate_hz_;
  std::vector<float> buf_;
  std::int64_t consumed_ = 0;
  bool last_verdict_ = false;
};

}  // namespace enfsim
