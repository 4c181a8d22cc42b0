#include "enfsim/wav.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace enfsim {

namespace {

template <typename T>
void put_le(std::ofstream& out, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::ifstream& in, const char* what) {
  unsigned char buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) {
    throw std::runtime_error(std::string("WAV: truncated reading ") + what);
  }
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

std::int16_t quantize_pcm16(float v) {
  const long q = std::lround(static_cast<double>(v) * 32768.0);
  if (q < -32768) return -32768;
  if (q > 32767) return 32767;
  return static_cast<std::int16_t>(q);
}

void write_wav(const std::filesystem::path& path, std::span<const float> samples,
               std::uint32_t sample_rate_hz) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_wav: cannot open " + path.string());

  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  out.write("RIFF", 4);
  put_le<std::uint32_t>(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_le<std::uint32_t>(out, 16);
  put_le<std::uint16_t>(out, 1);  // PCM
  put_le<std::uint16_t>(out, 1);  // mono
  put_le<std::uint32_t>(out, sample_rate_hz);
  put_le<std::uint32_t>(out, sample_rate_hz * 2);
  put_le<std::uint16_t>(out, 2);
  put_le<std::uint16_t>(out, 16);
  out.write("data", 4);
  put_le<std::uint32_t>(out, data_bytes);
  for (float s : samples) put_le<std::uint16_t>(out, static_cast<std::uint16_t>(quantize_pcm16(s)));
  out.close();
  if (!out) throw std::runtime_error("write_wav: write failed for " + path.string());
}

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_wav: cannot open " + path.string());

  char tag[4];
  in.read(tag, 4);
  if (in.gcount() != 4 || std::memcmp(tag, "RIFF", 4) != 0) throw std::runtime_error("WAV: missing RIFF tag");
  get_le<std::uint32_t>(in, "riff size");
  in.read(tag, 4);
  if (in.gcount() != 4 || std::memcmp(tag, "WAVE", 4) != 0) throw std::runtime_error("WAV: missing WAVE tag");

  WavData data;
  bool got_fmt = false;
  while (in.read(tag, 4) && in.gcount() == 4) {
    const auto chunk_size = get_le<std::uint32_t>(in, "chunk size");
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      const auto fmt = get_le<std::uint16_t>(in, "format");
      const auto channels = get_le<std::uint16_t>(in, "channels");
      data.sample_rate_hz = get_le<std::uint32_t>(in, "sample rate");
      get_le<std::uint32_t>(in, "byte rate");
      get_le<std::uint16_t>(in, "block align");
      const auto bits = get_le<std::uint16_t>(in, "bits per sample");
      if (fmt != 1 || channels != 1 || bits != 16) {
        throw std::runtime_error("WAV: expected 16-bit mono PCM");
      }
      if (chunk_size > 16) in.seekg(chunk_size - 16, std::ios::cur);
      got_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!got_fmt) throw std::runtime_error("WAV: data chunk before fmt");
      const std::size_t n = chunk_size / 2;
      data.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto raw = static_cast<std::int16_t>(get_le<std::uint16_t>(in, "sample"));
        data.samples[i] = static_cast<float>(raw) / 32768.0f;
      }
      return data;
    } else {
      in.seekg(chunk_size, std::ios::cur);
    }
  }
  throw std::runtime_error("WAV: no data chunk in " + path.string());
}

bool validate_wav(const std::filesystem::path& path) {
  read_wav(path);
  return true;
}

}  // namespace enfsim
