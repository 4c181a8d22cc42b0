#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace enfsim {

// Minimal RIFF/WAV, PCM 16-bit signed little-endian, mono. Samples cross the
// boundary as float in [-1, 1]; 16-bit quantization is applied exactly once,
// at write (scale 32768, clamped), and reads divide by 32768 so a
// write -> read -> write cycle is byte-identical.

void write_wav(const std::filesystem::path& path, std::span<const float> samples,
               std::uint32_t sample_rate_hz);

struct WavData {
  std::uint32_t sample_rate_hz = 0;
  std::vector<float> samples;
};

WavData read_wav(const std::filesystem::path& path);  // throws std::runtime_error on malformed input

bool validate_wav(const std::filesystem::path& path);

std::int16_t quantize_pcm16(float v);

}  // namespace enfsim
