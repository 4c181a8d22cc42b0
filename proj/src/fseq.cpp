#include "enfsim/fseq.hpp"

#include <cmath>
#include <cstring>
#include <vector>

namespace enfsim {

namespace {

constexpr char kMagic[4] = {'F', 'S', 'E', 'Q'};
constexpr std::uint64_t kHeaderBytes = 4 + 5 * 4 + 8;

template <typename T>
void put_le(std::ofstream& out, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::ifstream& in, const char* field, std::uint64_t offset) {
  unsigned char buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) {
    throw FseqError(field, offset, "truncated");
  }
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
  return v;
}

FseqHeader header_from_camera(const CameraParams& cam) {
  FseqHeader h;
  h.width = static_cast<std::uint32_t>(cam.width);
  h.height = static_cast<std::uint32_t>(cam.height);
  h.fps_num = cam.fps_num;
  h.fps_den = cam.fps_den;
  h.row_readout_ns = static_cast<std::uint32_t>(std::llround(cam.row_readout_s * 1e9));
  h.frame_count = 0;
  return h;
}

}  // namespace

std::uint8_t quantize_luminance(float v) {
  if (v <= 0.0f) return 0;
  if (v >= 255.0f) return 255;
  return static_cast<std::uint8_t>(std::lround(v));
}

FseqWriter::FseqWriter(const std::filesystem::path& path, const CameraParams& cam)
    : FseqWriter(path, header_from_camera(cam)) {}

FseqWriter::FseqWriter(const std::filesystem::path& path, const FseqHeader& header)
    : out_(path, std::ios::binary), path_(path), header_(header) {
  if (!out_) throw std::runtime_error("FseqWriter: cannot open " + path.string());
  out_.write(kMagic, 4);
  put_le(out_, header_.width);
  put_le(out_, header_.height);
  put_le(out_, header_.fps_num);
  put_le(out_, header_.fps_den);
  put_le(out_, header_.row_readout_ns);
  put_le(out_, std::uint64_t{0});  // frame_count patched on close
}

FseqWriter::~FseqWriter() {
  try {
    close();
  } catch (...) {
  }
}

void FseqWriter::write(const Frame& frame) {
  if (closed_) throw std::logic_error("FseqWriter: write after close");
  if (frame.width != static_cast<int>(header_.width) || frame.height != static_cast<int>(header_.height)) {
    throw std::invalid_argument("FseqWriter: frame dimensions do not match header");
  }
  put_le(out_, static_cast<std::uint64_t>(std::llround(frame.timestamp_s * 1e9)));
  std::vector<std::uint8_t> row(frame.width);
  for (int r = 0; r < frame.height; ++r) {
    const float* src = &frame.pixels[static_cast<std::size_t>(r) * frame.width];
    for (int c = 0; c < frame.width; ++c) row[c] = quantize_luminance(src[c]);
    out_.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  ++frames_written_;
}

void FseqWriter::close() {
  if (closed_) return;
  closed_ = true;
  out_.seekp(4 + 5 * 4, std::ios::beg);
  put_le(out_, frames_written_);
  out_.close();
  if (!out_) throw std::runtime_error("FseqWriter: write failed for " + path_.string());
}

FseqReader::FseqReader(const std::filesystem::path& path)
    : in_(path, std::ios::binary), path_(path) {
  if (!in_) throw std::runtime_error("FseqReader: cannot open " + path.string());
  char magic[4];
  in_.read(magic, 4);
  if (in_.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) {
    throw FseqError("magic", 0, "expected 'FSEQ'");
  }
  header_.width = get_le<std::uint32_t>(in_, "width", 4);
  header_.height = get_le<std::uint32_t>(in_, "height", 8);
  header_.fps_num = get_le<std::uint32_t>(in_, "fps_numerator", 12);
  header_.fps_den = get_le<std::uint32_t>(in_, "fps_denominator", 16);
  header_.row_readout_ns = get_le<std::uint32_t>(in_, "row_readout_ns", 20);
  header_.frame_count = get_le<std::uint64_t>(in_, "frame_count", 24);
  if (header_.width == 0 || header_.height == 0) {
    throw FseqError(header_.width == 0 ? "width" : "height", header_.width == 0 ? 4 : 8, "must be nonzero");
  }
  if (header_.fps_num == 0 || header_.fps_den == 0) {
    throw FseqError(header_.fps_num == 0 ? "fps_numerator" : "fps_denominator",
                    header_.fps_num == 0 ? 12 : 16, "must be nonzero");
  }
}

CameraParams FseqReader::camera() const {
  CameraParams cam;
  cam.width = static_cast<int>(header_.width);
  cam.height = static_cast<int>(header_.height);
  cam.fps_num = header_.fps_num;
  cam.fps_den = header_.fps_den;
  cam.row_readout_s = header_.row_readout_ns * 1e-9;
  return cam;
}

std::optional<Frame> FseqReader::next() {
  if (frames_read_ >= header_.frame_count) return std::nullopt;
  const std::uint64_t frame_bytes = 8 + static_cast<std::uint64_t>(header_.width) * header_.height;
  const std::uint64_t offset = kHeaderBytes + frames_read_ * frame_bytes;
  const std::uint64_t ts = get_le<std::uint64_t>(in_, "timestamp_ns", offset);

  Frame f;
  f.width = static_cast<int>(header_.width);
  f.height = static_cast<int>(header_.height);
  f.timestamp_s = static_cast<double>(ts) * 1e-9;
  f.row_readout_s = header_.row_readout_ns * 1e-9;
  f.pixels.resize(f.pixel_count());

  std::vector<std::uint8_t> raw(f.pixel_count());
  in_.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in_.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw FseqError("pixels", offset + 8, "truncated frame " + std::to_string(frames_read_));
  }
  for (std::size_t i = 0; i < raw.size(); ++i) f.pixels[i] = static_cast<float>(raw[i]);
  ++frames_read_;
  return f;
}

bool validate_fseq(const std::filesystem::path& path) {
  FseqReader reader(path);
  std::uint64_t n = 0;
  while (reader.next()) ++n;
  if (n != reader.header().frame_count) {
    throw FseqError("frame_count", 24, "header promises " + std::to_string(reader.header().frame_count) +
                                           " frames, file holds " + std::to_string(n));
  }
  return true;
}

}  // namespace enfsim
