#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "enfsim/enf.hpp"
#include "enfsim/rng.hpp"
#include "enfsim/spectrum.hpp"
#include "enfsim/stats.hpp"
#include "oracles.hpp"

using namespace enfsim;

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

EnfSeries constant_series(double hz, double duration_s, double rate = 1.0) {
  EnfSeries s;
  s.rate_hz = rate;
  const auto n = static_cast<std::size_t>(duration_s * rate) + 1;
  s.values_hz.assign(n, hz);
  return s;
}
}  // namespace

TEST_CASE("synth_enf stays inside the deviation band (seed 7, 600 s)") {
  GridParams p;
  const auto series = synth_enf(p, 600.0, 7);
  CHECK(series.values_hz.size() == 600);
  for (double v : series.values_hz) {
    CHECK(v >= 59.98);
    CHECK(v <= 60.02);
  }
}

TEST_CASE("synth_enf with zero volatility is exactly nominal") {
  GridParams p;
  p.volatility = 0.0;
  const auto series = synth_enf(p, 30.0, 3);
  for (double v : series.values_hz) CHECK(v == 60.0);
}

TEST_CASE("synth_enf is deterministic per seed") {
  GridParams p;
  const auto a = synth_enf(p, 120.0, 42);
  const auto b = synth_enf(p, 120.0, 42);
  CHECK(a.values_hz == b.values_hz);
  const auto c = synth_enf(p, 120.0, 43);
  CHECK(a.values_hz != c.values_hz);
}

TEST_CASE("synth_enf band containment holds across 100 seeds") {
  GridParams p;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto series = synth_enf(p, 64.0, seed);
    for (double v : series.values_hz) {
      REQUIRE(std::fabs(v - p.f_nominal_hz) <= p.deviation_bound_hz + 1e-12);
    }
  }
}

TEST_CASE("synth_enf length and error handling") {
  GridParams p;
  CHECK(synth_enf(p, 10.4, 1).values_hz.size() == 11);  // ceil
  CHECK_THROWS_AS(synth_enf(p, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(synth_enf(p, -3.0, 1), std::invalid_argument);
  GridParams bad = p;
  bad.f_nominal_hz = 55.0;
  CHECK_THROWS_AS(synth_enf(bad, 10.0, 1), std::invalid_argument);
}

TEST_CASE("enf_phase of a constant series") {
  const auto s = constant_series(60.0, 10.0);
  CHECK(enf_phase(s, 0.0) == 0.0);
  CHECK(enf_phase(s, 1.0) == doctest::Approx(kTwoPi * 60.0).epsilon(1e-12));
  CHECK(enf_phase(s, 2.5) == doctest::Approx(kTwoPi * 150.0).epsilon(1e-12));
}

TEST_CASE("enf_phase of a linear ramp matches the closed-form trapezoid") {
  EnfSeries s;
  s.rate_hz = 1.0;
  s.values_hz = {59.99, 60.00, 60.01};  // ramp over 2 s
  CHECK(enf_phase(s, 2.0) == doctest::Approx(kTwoPi * 120.0).epsilon(1e-6));
}

TEST_CASE("enf_phase range errors and monotonicity") {
  const auto s = constant_series(60.0, 5.0);
  CHECK_THROWS_AS(enf_phase(s, -0.1), std::out_of_range);
  CHECK_THROWS_AS(enf_phase(s, 5.1), std::out_of_range);

  GridParams p;
  const auto walk = synth_enf(p, 40.0, 11);
  double prev = -1.0;
  for (double t = 0.0; t <= 39.0; t += 0.37) {
    const double ph = enf_phase(walk, t);
    CHECK(ph > prev);
    prev = ph;
  }
}

TEST_CASE("CumulativePhase agrees with enf_phase") {
  GridParams p;
  const auto s = synth_enf(p, 30.0, 5);
  CumulativePhase cum(s);
  for (double t = 0.0; t <= 29.0; t += 0.173) {
    CHECK(cum.at(t) == doctest::Approx(enf_phase(s, t)).epsilon(1e-12));
  }
}

TEST_CASE("dft of a constant is DC only") {
  std::vector<double> x(8, 3.25);
  const auto spec = dft(x);
  CHECK(spec.bins[0].real() == doctest::Approx(8 * 3.25).epsilon(1e-12));
  CHECK(std::abs(spec.bins[0].imag()) < 1e-9);
  for (std::size_t k = 1; k < 8; ++k) CHECK(std::abs(spec.bins[k]) < 1e-9);
}

TEST_CASE("dft of a bin-2 cosine, N = 16") {
  std::vector<double> x(16);
  for (int n = 0; n < 16; ++n) x[n] = std::cos(kTwoPi * 2.0 * n / 16.0);
  const auto spec = dft(x);
  for (std::size_t k = 0; k < 16; ++k) {
    if (k == 2 || k == 14) {
      CHECK(std::abs(spec.bins[k]) == doctest::Approx(8.0).epsilon(1e-9));
    } else {
      CHECK(std::abs(spec.bins[k]) < 1e-9);
    }
  }
}

TEST_CASE("dft matches the naive defining sum on random input") {
  Rng rng(99);
  std::vector<double> x(256);
  for (auto& v : x) v = rng.uniform();
  const auto fast = dft(x);
  const auto naive = oracle::naive_dft(x);
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    worst = std::max(worst, std::abs(fast.bins[k] - naive[k]));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("dft matches naive sum on awkward (prime) lengths") {
  Rng rng(7);
  std::vector<double> x(251);
  for (auto& v : x) v = rng.uniform() - 0.5;
  const auto fast = dft(x);
  const auto naive = oracle::naive_dft(x);
  for (std::size_t k = 0; k < x.size(); ++k) {
    REQUIRE(std::abs(fast.bins[k] - naive[k]) < 1e-7);
  }
}

TEST_CASE("dft rejects empty input") {
  CHECK_THROWS_AS(dft(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("dft round trip (idft) recovers the input") {
  Rng rng(123);
  for (std::size_t n : {8u, 100u, 255u}) {
    std::vector<double> x(n);
    for (auto& v : x) v = 2.0 * rng.uniform() - 1.0;
    const auto back = idft(dft(x));
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(std::fabs(back[i] - x[i]) < 1e-9 * static_cast<double>(n));
    }
  }
}

TEST_CASE("stft frame count: 10 s, frame 4 s, hop 1 s -> 7 frames") {
  std::vector<double> x(1000, 1.0);
  const auto frames = stft(x, 100.0, 4.0, 1.0, Window::rect);
  CHECK(frames.size() == 7);
  CHECK(frames[0].center_time_s == doctest::Approx(2.0));
  CHECK(frames[6].center_time_s == doctest::Approx(8.0));
}

TEST_CASE("rect-window stft of a constant: every frame is DC N*c") {
  std::vector<double> x(600, 2.5);
  const auto frames = stft(x, 50.0, 4.0, 2.0, Window::rect);
  REQUIRE(!frames.empty());
  for (const auto& f : frames) {
    CHECK(f.spectrum.bins[0].real() == doctest::Approx(200 * 2.5).epsilon(1e-12));
  }
}

TEST_CASE("hann-window stft finds a pure tone within one bin") {
  const double fs = 800.0, tone = 123.4;
  std::vector<double> x(static_cast<std::size_t>(fs) * 10);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(kTwoPi * tone * i / fs);
  const auto frames = stft(x, fs, 2.0, 1.0, Window::hann);
  REQUIRE(!frames.empty());
  const double df = fs / (2.0 * fs);  // frame length 1600 -> 0.5 Hz bins
  for (const auto& f : frames) {
    std::size_t peak = 1;
    for (std::size_t k = 1; k + 1 < f.spectrum.bins.size() / 2; ++k) {
      if (std::abs(f.spectrum.bins[k]) > std::abs(f.spectrum.bins[peak])) peak = k;
    }
    CHECK(std::fabs(f.spectrum.bin_hz(peak) - tone) <= df);
  }
}

TEST_CASE("stft with insufficient samples returns empty, bad params throw") {
  std::vector<double> x(100, 1.0);
  CHECK(stft(x, 100.0, 4.0, 1.0, Window::hann).empty());
  CHECK_THROWS_AS(stft(x, 100.0, 1.0, 2.0, Window::hann), std::invalid_argument);
  CHECK_THROWS_AS(stft(x, 100.0, 1.0, 0.0, Window::hann), std::invalid_argument);
}

TEST_CASE("pearson basics") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  std::vector<double> same = x;
  CHECK(pearson(x, same) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> neg{-1.0, -2.0, -3.0, -4.0};
  CHECK(pearson(x, neg) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pearson matches the direct formula") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  std::vector<double> y{2.0, 4.0, 6.0, 8.1};
  CHECK(pearson(x, y) == doctest::Approx(oracle::direct_pearson(x, y)).epsilon(1e-12));
}

TEST_CASE("pearson rejects constant input and bad shapes") {
  std::vector<double> c{3.0, 3.0, 3.0};
  std::vector<double> x{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(pearson(c, x), undefined_correlation);
  CHECK_THROWS_AS(pearson(x, c), undefined_correlation);
  std::vector<double> short_x{1.0};
  CHECK_THROWS_AS(pearson(short_x, short_x), std::invalid_argument);
  std::vector<double> y{1.0, 2.0};
  CHECK_THROWS_AS(pearson(x, y), std::invalid_argument);
}

TEST_CASE("pearson is invariant under positive affine transforms") {
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(32), y(32);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.gaussian();
      y[i] = rng.gaussian();
    }
    const double base = pearson(x, y);
    const double a = 0.1 + 5.0 * rng.uniform();
    const double b = 10.0 * (rng.uniform() - 0.5);
    std::vector<double> ax(32);
    for (std::size_t i = 0; i < x.size(); ++i) ax[i] = a * x[i] + b;
    CHECK(pearson(ax, y) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("EnfSeries CSV round trip") {
  GridParams p;
  const auto s = synth_enf(p, 20.0, 9);
  const auto path = std::filesystem::temp_directory_path() / "enfsim_test_series.csv";
  write_enf_csv(path, s);
  const auto back = read_enf_csv(path);
  REQUIRE(back.values_hz.size() == s.values_hz.size());
  CHECK(back.rate_hz == doctest::Approx(s.rate_hz));
  for (std::size_t i = 0; i < s.values_hz.size(); ++i) {
    CHECK(back.values_hz[i] == doctest::Approx(s.values_hz[i]).epsilon(1e-6));
  }
  std::filesystem::remove(path);
}
