#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "enfsim/fseq.hpp"
#include "enfsim/render.hpp"
#include "enfsim/rng.hpp"
#include "enfsim/wav.hpp"

using namespace enfsim;

namespace {
std::filesystem::path tmp(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

std::vector<char> slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}
}  // namespace

TEST_CASE("FSEQ writer -> reader reproduces frames and timestamps exactly") {
  SceneScript script;
  script.duration_s = 1.0;
  CameraParams cam;
  EnfSeries enf;
  enf.values_hz.assign(4, 60.0);

  const auto path = tmp("enfsim_rt.fseq");
  std::vector<Frame> originals;
  {
    FrameRenderer r(script, enf, cam, 9);
    FseqWriter w(path, cam);
    while (auto f = r.next()) {
      originals.push_back(*f);
      w.write(*f);
    }
    w.close();
  }

  FseqReader reader(path);
  CHECK(reader.header().width == 320);
  CHECK(reader.header().height == 240);
  CHECK(reader.header().fps_num == 30);
  CHECK(reader.header().frame_count == 30);

  std::size_t i = 0;
  while (auto f = reader.next()) {
    REQUIRE(i < originals.size());
    CHECK(f->timestamp_s ==
          doctest::Approx(static_cast<double>(cam.frame_timestamp_ns(static_cast<std::int64_t>(i))) * 1e-9)
              .epsilon(1e-12));
    for (std::size_t p = 0; p < f->pixels.size(); ++p) {
      REQUIRE(f->pixels[p] == static_cast<float>(quantize_luminance(originals[i].pixels[p])));
    }
    ++i;
  }
  CHECK(i == 30);

  // a second write of what was read is byte-identical (quantization is stable)
  const auto path2 = tmp("enfsim_rt2.fseq");
  {
    FseqReader again(path);
    FseqWriter w(path2, again.header());
    while (auto f = again.next()) w.write(*f);
    w.close();
  }
  CHECK(slurp(path) == slurp(path2));
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}

TEST_CASE("FSEQ parse errors name the field and byte offset") {
  const auto path = tmp("enfsim_bad.fseq");
  {
    std::ofstream out(path, std::ios::binary);
    out << "JUNKdata";
  }
  try {
    FseqReader r(path);
    FAIL("expected FseqError");
  } catch (const FseqError& e) {
    CHECK(e.field == "magic");
    CHECK(e.offset == 0);
  }

  {
    std::ofstream out(path, std::ios::binary);
    out << "FSEQ";
    out.write("\x40\x01\x00\x00", 4);  // width 320, then truncated
  }
  try {
    FseqReader r(path);
    FAIL("expected FseqError");
  } catch (const FseqError& e) {
    CHECK(e.field == "height");
    CHECK(e.offset == 8);
  }
  std::filesystem::remove(path);
}

TEST_CASE("FSEQ validation catches a frame-count mismatch") {
  const auto path = tmp("enfsim_short.fseq");
  CameraParams cam;
  cam.width = 8;
  cam.height = 4;
  {
    FseqHeader h;
    h.width = 8;
    h.height = 4;
    h.fps_num = 30;
    h.fps_den = 1;
    h.row_readout_ns = 1000;
    FseqWriter w(path, h);
    Frame f;
    f.width = 8;
    f.height = 4;
    f.pixels.assign(32, 100.0f);
    w.write(f);
    w.close();
  }
  // corrupt the frame count in the header
  {
    std::fstream io(path, std::ios::binary | std::ios::in | std::ios::out);
    io.seekp(24);
    const std::uint64_t lied = 5;
    io.write(reinterpret_cast<const char*>(&lied), 8);
  }
  CHECK_THROWS_AS(validate_fseq(path), FseqError);
  std::filesystem::remove(path);
}

TEST_CASE("WAV round trip is exact and re-writing is byte-identical") {
  Rng rng(4);
  std::vector<float> samples(12345);
  for (auto& s : samples) s = static_cast<float>(2.0 * rng.uniform() - 1.0);
  samples[0] = 1.0f;    // clamps to 32767
  samples[1] = -1.0f;   // exactly -32768

  const auto path = tmp("enfsim_rt.wav");
  write_wav(path, samples, 8000);
  const auto data = read_wav(path);
  CHECK(data.sample_rate_hz == 8000);
  REQUIRE(data.samples.size() == samples.size());

  const auto path2 = tmp("enfsim_rt2.wav");
  write_wav(path2, data.samples, data.sample_rate_hz);
  CHECK(slurp(path) == slurp(path2));

  for (std::size_t i = 0; i < samples.size(); ++i) {
    REQUIRE(data.samples[i] == static_cast<float>(quantize_pcm16(samples[i])) / 32768.0f);
  }
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}

TEST_CASE("WAV reader rejects malformed input") {
  const auto path = tmp("enfsim_bad.wav");
  {
    std::ofstream out(path, std::ios::binary);
    out << "RIFFxxxxWAVEjunk";
  }
  CHECK_THROWS_AS(read_wav(path), std::runtime_error);
  std::filesystem::remove(path);
}
