#include "enfsim/noise_gate.hpp"

#include <cmath>
#include <stdexcept>

#include "enfsim/spectrum.hpp"

namespace enfsim {

void NoiseGateParams::validate() const {
  if (!(threshold > 0.0)) throw std::invalid_argument("NoiseGateParams: threshold must be > 0");
  if (!(nominal_hz > 0.0)) throw std::invalid_argument("NoiseGateParams: nominal must be > 0");
  if (guard_hz < 0.0) throw std::invalid_argument("NoiseGateParams: guard must be >= 0");
  if (block_len < 256) throw std::invalid_argument("NoiseGateParams: block_len must be >= 256");
}

double noise_gate_level(const AudioBlock& block, const NoiseGateParams& params) {
  params.validate();
  if (block.samples.size() < 256) {
    throw std::invalid_argument("noise_gate_level: block shorter than 256 samples");
  }
  std::vector<double> x(block.samples.begin(), block.samples.end());
  const auto spec = dft(x, block.sample_rate_hz);
  const std::size_t n = spec.n_samples;

  double acc = 0.0;
  std::size_t kept = 0;
  for (std::size_t k = 1; k < n; ++k) {
    const double f = spec.folded_bin_hz(k);
    bool guarded = false;
    for (int h : params.hum_harmonics) {
      if (std::fabs(f - h * params.nominal_hz) <= params.guard_hz) {
        guarded = true;
        break;
      }
    }
    if (guarded) continue;
    acc += std::abs(spec.bins[k]);
    ++kept;
  }
  if (kept == 0) return 0.0;
  return (2.0 / static_cast<double>(n)) * (acc / static_cast<double>(kept));
}

bool detect_audio_noise(const AudioBlock& block, const NoiseGateParams& params) {
  return noise_gate_level(block, params) > params.threshold;
}

AudioGate::AudioGate(NoiseGateParams params, double sample_rate_hz)
    : params_(std::move(params)), sample_rate_hz_(sample_rate_hz) {
  params_.validate();
}

std::vector<AudioGate::BlockVerdict> AudioGate::push(std::span<const float> samples) {
  buf_.insert(buf_.end(), samples.begin(), samples.end());
  std::vector<BlockVerdict> out;
  while (buf_.size() >= params_.block_len) {
    AudioBlock block;
    block.sample_rate_hz = sample_rate_hz_;
    block.start_offset = consumed_;
    block.samples.assign(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(params_.block_len));
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(params_.block_len));
    consumed_ += static_cast<std::int64_t>(params_.block_len);
    last_verdict_ = detect_audio_noise(block, params_);
    out.push_back({consumed_, last_verdict_});
  }
  return out;
}

std::vector<AudioGate::BlockVerdict> AudioGate::flush() {
  std::vector<BlockVerdict> out;
  if (buf_.empty()) return out;
  consumed_ += static_cast<std::int64_t>(buf_.size());
  if (buf_.size() >= 256) {
    AudioBlock block;
    block.sample_rate_hz = sample_rate_hz_;
    block.start_offset = consumed_ - static_cast<std::int64_t>(buf_.size());
    block.samples = buf_;
    last_verdict_ = detect_audio_noise(block, params_);
  }
  out.push_back({consumed_, last_verdict_});
  buf_.clear();
  return out;
}

}  // namespace enfsim
