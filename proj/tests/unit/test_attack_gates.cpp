#include <doctest.h>

#include <cmath>

#include "enfsim/blur.hpp"
#include "enfsim/motion.hpp"
#include "enfsim/noise_gate.hpp"
#include "enfsim/render.hpp"
#include "enfsim/rng.hpp"
#include "enfsim/trigger.hpp"
#include "oracles.hpp"

using namespace enfsim;

namespace {

Frame make_frame(int w, int h, float value = 0.0f) {
  Frame f;
  f.width = w;
  f.height = h;
  f.row_readout_s = 1e-4;
  f.pixels.assign(static_cast<std::size_t>(w) * h, value);
  return f;
}

Frame random_frame(int w, int h, Rng& rng) {
  Frame f = make_frame(w, h);
  for (auto& p : f.pixels) p = static_cast<float>(255.0 * rng.uniform());
  return f;
}

EnfSeries constant_enf(double hz, double duration_s) {
  EnfSeries s;
  s.rate_hz = 1.0;
  s.values_hz.assign(static_cast<std::size_t>(duration_s) + 2, hz);
  return s;
}

std::vector<double> audio_of(const SceneScript& script, const CameraParams& cam, std::uint64_t seed) {
  AudioRenderer r(script, constant_enf(60.0, script.duration_s), cam, seed);
  std::vector<double> out;
  while (auto b = r.next()) out.insert(out.end(), b->samples.begin(), b->samples.end());
  return out;
}

}  // namespace

TEST_CASE("blur of a constant frame is the same constant") {
  const auto f = make_frame(64, 48, 100.0f);
  const auto out = gaussian_blur(f, BlurParams{});
  for (float p : out.pixels) CHECK(p == doctest::Approx(100.0f).epsilon(1e-6));
}

TEST_CASE("3x3 sigma-1 kernel center weight is 0.2042") {
  // unit impulse before quantization; the center output is the normalized
  // center weight of the sampled kernel
  auto f = make_frame(9, 9, 0.0f);
  f.at(4, 4) = 1.0f;
  BlurParams p;
  p.kernel_size = 3;
  p.sigma_px = 1.0;
  const auto out = gaussian_blur(f, p);
  CHECK(out.at(4, 4) == doctest::Approx(0.2042).epsilon(0.0005));
  CHECK(std::fabs(out.at(4, 4) - 0.2042) < 0.0001);
}

TEST_CASE("default blur kernel is 21x21 with sigma kernel/6") {
  BlurParams p;
  CHECK(p.kernel_size == 21);
  CHECK(p.sigma() == doctest::Approx(3.5));
}

TEST_CASE("separable blur equals the direct 2-D convolution oracle") {
  Rng rng(31);
  BlurParams p;
  for (int rep = 0; rep < 5; ++rep) {
    const auto f = random_frame(96, 64, rng);
    const auto fast = gaussian_blur(f, p);
    const auto direct = oracle::direct_gaussian_blur(f, p.kernel_size, p.sigma());
    for (std::size_t i = 0; i < f.pixels.size(); ++i) {
      REQUIRE(std::fabs(fast.pixels[i] - direct.pixels[i]) <= 1.0);  // one quantization level
    }
  }
}

TEST_CASE("blur rejects kernels larger than the frame and bad params") {
  const auto f = make_frame(16, 16, 0.0f);
  BlurParams p;
  p.kernel_size = 21;
  CHECK_THROWS_AS(gaussian_blur(f, p), std::invalid_argument);
  p.kernel_size = 4;
  CHECK_THROWS_AS(gaussian_blur(f, p), std::invalid_argument);
  p.kernel_size = 3;
  p.sigma_px = 0.0;
  CHECK_THROWS_AS(gaussian_blur(f, p), std::invalid_argument);
}

TEST_CASE("identical frames produce no motion") {
  const auto f = make_frame(320, 240, 50.0f);
  const auto res = detect_motion(f, f, MotionParams{});
  CHECK_FALSE(res.motion);
  CHECK(res.changed_count == 0);
}

TEST_CASE("500 changed pixels out of 320x240 crosses the 0.5% line") {
  const auto prev = make_frame(320, 240, 50.0f);
  auto cur = prev;
  for (int i = 0; i < 500; ++i) cur.pixels[static_cast<std::size_t>(i) * 150] += 50.0f;
  const auto res = detect_motion(prev, cur, MotionParams{});
  CHECK(res.motion);
  CHECK(res.changed_count == 500);
}

TEST_CASE("changes of exactly the pixel threshold do not count") {
  const auto prev = make_frame(320, 240, 50.0f);
  auto cur = prev;
  for (auto& p : cur.pixels) p += 10.0f;
  const auto res = detect_motion(prev, cur, MotionParams{});
  CHECK_FALSE(res.motion);
  CHECK(res.changed_count == 0);

  // one level past the threshold flips every pixel
  for (auto& p : cur.pixels) p += 1.0f;
  const auto res2 = detect_motion(prev, cur, MotionParams{});
  CHECK(res2.motion);
  CHECK(res2.changed_count == 320 * 240);
}

TEST_CASE("motion detection rejects mismatched dimensions") {
  const auto a = make_frame(32, 32, 0.0f);
  const auto b = make_frame(32, 16, 0.0f);
  CHECK_THROWS_AS(detect_motion(a, b, MotionParams{}), std::invalid_argument);
}

TEST_CASE("noise gate: silence is quiet, derived calibration holds") {
  CameraParams cam;
  NoiseGateParams gate;

  AudioBlock zeros;
  zeros.sample_rate_hz = 8000.0;
  zeros.samples.assign(2048, 0.0f);
  CHECK_FALSE(detect_audio_noise(zeros, gate));

  // calibration: threshold = 3x the quiet-segment mean on default synthesis
  SceneScript quiet_script;
  quiet_script.duration_s = 2.0;
  const auto quiet = audio_of(quiet_script, cam, 21);
  AudioBlock qb;
  qb.sample_rate_hz = 8000.0;
  qb.samples.assign(quiet.begin() + 2048, quiet.begin() + 2048 + 2048);
  const double quiet_level = noise_gate_level(qb, gate);
  const double calibrated = 3.0 * quiet_level;

  // the pinned default sits near the calibrated point
  CHECK(gate.threshold == doctest::Approx(calibrated).epsilon(0.5));

  NoiseGateParams cal = gate;
  cal.threshold = calibrated;

  // pure hum at amplitude 0.1: quiet (leakage stays under the gate)
  SceneScript hum_script;
  hum_script.duration_s = 2.0;
  CameraParams hum_cam = cam;
  hum_cam.audio_noise_sigma = 0.0;
  hum_cam.hum_harmonics = {{1, 1.0}};
  const auto hum = audio_of(hum_script, hum_cam, 22);
  AudioBlock hb;
  hb.sample_rate_hz = 8000.0;
  hb.samples.assign(hum.begin() + 1024, hum.begin() + 1024 + 2048);
  CHECK_FALSE(detect_audio_noise(hb, cal));

  // white burst at 0.5: noisy
  SceneScript burst_script;
  burst_script.duration_s = 2.0;
  burst_script.noise_bursts.push_back({0.5, 1.5, 0.5});
  const auto noisy = audio_of(burst_script, cam, 23);
  AudioBlock nb;
  nb.sample_rate_hz = 8000.0;
  nb.samples.assign(noisy.begin() + 8000, noisy.begin() + 8000 + 2048);
  CHECK(detect_audio_noise(nb, cal));
  CHECK(detect_audio_noise(nb, gate));
}

TEST_CASE("noise gate rejects blocks under 256 samples") {
  AudioBlock b;
  b.sample_rate_hz = 8000.0;
  b.samples.assign(255, 0.0f);
  CHECK_THROWS_AS(detect_audio_noise(b, NoiseGateParams{}), std::invalid_argument);
}

TEST_CASE("streaming AudioGate matches block-at-a-time gating") {
  CameraParams cam;
  SceneScript script;
  script.duration_s = 2.0;
  script.noise_bursts.push_back({0.8, 1.3, 0.6});
  const auto samples = audio_of(script, cam, 31);

  NoiseGateParams params;
  AudioGate gate(params, 8000.0);
  std::vector<AudioGate::BlockVerdict> verdicts;
  // feed in awkward chunk sizes
  std::size_t pos = 0;
  const std::size_t chunks[] = {100, 1000, 3000, 50, 2048, 4000};
  std::size_t ci = 0;
  while (pos < samples.size()) {
    const std::size_t n = std::min(chunks[ci++ % 6], samples.size() - pos);
    std::vector<float> chunk(samples.begin() + pos, samples.begin() + pos + n);
    for (const auto& v : gate.push(chunk)) verdicts.push_back(v);
    pos += n;
  }
  for (const auto& v : gate.flush()) verdicts.push_back(v);

  REQUIRE(!verdicts.empty());
  for (const auto& v : verdicts) {
    if (v.end_sample % 2048 != 0) continue;  // skip the flush tail
    AudioBlock block;
    block.sample_rate_hz = 8000.0;
    block.samples.assign(samples.begin() + v.end_sample - 2048, samples.begin() + v.end_sample);
    CHECK(detect_audio_noise(block, params) == v.noisy);
  }
  // the burst must have tripped at least one block
  bool any_noisy = false;
  for (const auto& v : verdicts) any_noisy = any_noisy || v.noisy;
  CHECK(any_noisy);
}

TEST_CASE("trigger: the exact template is found at NCC 1.0") {
  Rng rng(8);
  auto f = random_frame(160, 120, rng);
  const auto templ = Patch::fiducial();
  for (int r = 0; r < 32; ++r) {
    for (int c = 0; c < 32; ++c) f.at(40 + r, 70 + c) = templ.pixels[static_cast<std::size_t>(r) * 32 + c];
  }
  const auto hit = detect_trigger(f, templ, 0.8);
  REQUIRE(hit.has_value());
  CHECK(hit->x == 70);
  CHECK(hit->y == 40);
  CHECK(hit->ncc == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("trigger: pure noise never clears the 0.8 threshold") {
  Rng rng(9);
  const auto templ = Patch::fiducial();
  for (int rep = 0; rep < 5; ++rep) {
    const auto f = random_frame(160, 120, rng);
    CHECK_FALSE(detect_trigger(f, templ, 0.8).has_value());
  }
}

TEST_CASE("trigger: survives additive gaussian noise of sigma 10") {
  const auto templ = Patch::fiducial();
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed
    * 2654435761ULL + 1);
    auto f = make_frame(160, 120, 128.0f);
    for (int r = 0; r < 32; ++r) {
      for (int c = 0; c < 32; ++c) {
        f.at(60 + r, 90 + c) = templ.pixels[static_cast<std::size_t>(r) * 32 + c];
      }
    }
    for (auto& p : f.pixels) {
      p = std::clamp(p + 10.0f * rng.gaussian_fast(), 0.0f, 255.0f);
    }
    const auto hit = detect_trigger(f, templ, 0.8);
    if (hit && std::abs(hit->x - 90) <= 1 && std::abs(hit->y - 60) <= 1) ++hits;
  }
  CHECK(hits == 100);
}

TEST_CASE("fast NCC equals the direct oracle everywhere") {
  Rng rng(12);
  const auto templ = Patch::fiducial(16, 4);
  auto f = random_frame(64, 48, rng);
  // plant a flat region to exercise the zero-variance guard
  for (int r = 10; r < 30; ++r) {
    for (int c = 5; c < 30; ++c) f.at(r, c) = 77.0f;
  }
  const auto fast = ncc_map(f, templ);
  const auto direct = oracle::direct_ncc_map(f, templ);
  REQUIRE(fast.size() == direct.size());
  for (std::size_t i = 0; i < fast.size(); ++i) {
    REQUIRE(std::fabs(fast[i] - direct[i]) < 1e-6);
  }
}

TEST_CASE("trigger template must fit inside the frame") {
  const auto f = make_frame(16, 16, 0.0f);
  CHECK_THROWS_AS(ncc_map(f, Patch::fiducial(32, 4)), std::invalid_argument);
}
