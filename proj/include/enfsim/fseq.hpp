#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include "enfsim/frame.hpp"

namespace enfsim {

// FSEQ: "FSEQ" magic, then little-endian u32 width, u32 height,
// u32 fps_numerator, u32 fps_denominator, u32 row_readout_ns, u64 frame_count,
// then per frame a u64 timestamp_ns followed by width*height bytes of
// row-major 8-bit luminance. Pixel quantization happens here, once, at write.

struct FseqHeader {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t fps_num = 0;
  std::uint32_t fps_den = 0;
  std::uint32_t row_readout_ns = 0;
  std::uint64_t frame_count = 0;
};

// Parse failure names the offending field and its byte offset.
struct FseqError : std::runtime_error {
  FseqError(const std::string& field_, std::uint64_t offset_, const std::string& what_)
      : std::runtime_error("FSEQ parse error at byte " + std::to_string(offset_) + ", field '" +
                           field_ + "': " + what_),
        field(field_),
        offset(offset_) {}
  std::string field;
  std::uint64_t offset;
};

class FseqWriter {
 public:
  FseqWriter(const std::filesystem::path& path, const CameraParams& cam);
  FseqWriter(const std::filesystem::path& path, const FseqHeader& header);
  ~FseqWriter();

  void write(const Frame& frame);
  void close();  // patches frame_count; called by dtor if needed
  std::uint64_t frames_written() const { return frames_written_; }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  FseqHeader header_;
  std::uint64_t frames_written_ = 0;
  bool closed_ = false;
};

class FseqReader final : public FrameSource {
 public:
  explicit FseqReader(const std::filesystem::path& path);

  const FseqHeader& header() const { return header_; }
  CameraParams camera() const;  // geometry/timing fields only
  std::optional<Frame> next() override;

 private:
  std::ifstream in_;
  std::filesystem::path path_;
  FseqHeader header_;
  std::uint64_t frames_read_ = 0;
};

// 8-bit luminance quantization used by the writer (round half away from zero,
// clamped); exposed so tests can reason about round trips.
std::uint8_t quantize_luminance(float v);

bool validate_fseq(const std::filesystem::path& path);  // full scan, throws FseqError

}  // namespace enfsim
