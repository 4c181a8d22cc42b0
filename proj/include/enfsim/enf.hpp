#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace enfsim {

// Power grid model: nominal frequency plus a bounded mean-reverting
// fluctuation. The US Eastern Interconnect values are the defaults
// (60 Hz nominal, +/-0.02 Hz band).
struct GridParams {
  double f_nominal_hz = 60.0;     // 50 or 60
  double deviation_bound_hz = 0.02;
  double reversion_rate = 0.05;   // 1/s, pull toward nominal
  double volatility = 0.005;      // Hz/sqrt(s)
  double sample_rate_enf_hz = 1.0;

  void validate() const;  // throws std::invalid_argument
};

// Time-stamped instantaneous grid frequency samples. Doubles as the
// ground-truth series, the reference database contents, and the
// estimation target.
struct EnfSeries {
  double start_time_s = 0.0;
  double rate_hz = 1.0;
  std::vector<double> values_hz;

  std::size_t size() const { return values_hz.size(); }
  double time_of(std::size_t i) const { return start_time_s + static_cast<double>(i) / rate_hz; }
  double end_time_s() const;
  bool covers(double t) const;
  // linear interpolation between samples; throws std::out_of_range outside coverage
  double value_at(double t) const;
};

// Mean-reverting random walk reflected at the deviation band edges.
// Deterministic per seed; every value stays within
// [f_nominal - bound, f_nominal + bound].
EnfSeries synth_enf(const GridParams& params, double duration_s, std::uint64_t seed);

// Cumulative phase 2*pi * integral of f from series start to t, by
// trapezoidal integration (the series is treated as piecewise linear).
double enf_phase(const EnfSeries& series, double t_s);

// Prefix-summed phase for O(1) queries; what the renderers use.
class CumulativePhase {
 public:
  explicit CumulativePhase(const EnfSeries& series);
  double at(double t_s) const;  // same contract as enf_phase

 private:
  double start_time_s_;
  double rate_hz_;
  std::vector<double> values_hz_;
  std::vector<double> cum_;  // cum_[k] = 2*pi * integral up to sample k
};

// CSV: header "time_s,freq_hz", 6 decimal places, LF line endings.
void write_enf_csv(const std::filesystem::path& path, const EnfSeries& series);
EnfSeries read_enf_csv(const std::filesystem::path& path);

}  // namespace enfsim
