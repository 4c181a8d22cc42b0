#include "enfsim/enf.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "enfsim/rng.hpp"

namespace enfsim {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}

void GridParams::validate() const {
  if (f_nominal_hz != 50.0 && f_nominal_hz != 60.0) {
    throw std::invalid_argument("GridParams: f_nominal_hz must be 50 or 60");
  }
  if (!(deviation_bound_hz > 0.0)) {
    throw std::invalid_argument("GridParams: deviation_bound_hz must be > 0");
  }
  if (reversion_rate < 0.0) {
    throw std::invalid_argument("GridParams: reversion_rate must be >= 0");
  }
  if (volatility < 0.0) {
    throw std::invalid_argument("GridParams: volatility must be >= 0");
  }
  if (!(sample_rate_enf_hz > 0.0)) {
    throw std::invalid_argument("GridParams: sample_rate_enf_hz must be > 0");
  }
}

double EnfSeries::end_time_s() const {
  if (values_hz.empty()) return start_time_s;
  return time_of(values_hz.size() - 1);
}

bool EnfSeries::covers(double t) const {
  return !values_hz.empty() && t >= start_time_s && t <= end_time_s();
}

double EnfSeries::value_at(double t) const {
  if (!covers(t)) {
    throw std::out_of_range("EnfSeries::value_at: t outside series coverage");
  }
  const double pos = (t - start_time_s) * rate_hz;
  const auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= values_hz.size()) return values_hz.back();
  const double frac = pos - static_cast<double>(k);
  return values_hz[k] + frac * (values_hz[k + 1] - values_hz[k]);
}

EnfSeries synth_enf(const GridParams& params, double duration_s, std::uint64_t seed) {
  params.validate();
  if (!(duration_s > 0.0)) {
    throw std::invalid_argument("synth_enf: duration must be > 0");
  }
  const auto n = static_cast<std::size_t>(std::ceil(duration_s * params.sample_rate_enf_hz));
  const double dt = 1.0 / params.sample_rate_enf_hz;
  const double bound = params.deviation_bound_hz;
  const double sqrt_dt = std::sqrt(dt);

  Rng rng(seed);
  EnfSeries series;
  series.start_time_s = 0.0;
  series.rate_hz = params.sample_rate_enf_hz;
  series.values_hz.reserve(n);

  // Start from a draw of the stationary distribution so short series do not
  // all begin glued to the nominal.
  double dev = 0.0;
  if (params.volatility > 0.0) {
    const double decay = 1.0 - params.reversion_rate * dt;
    double var_st;
    if (decay > -1.0 && decay < 1.0) {
      var_st = params.volatility * params.volatility * dt / (1.0 - decay * decay);
    } else {
      var_st = bound * bound;
    }
    dev = std::sqrt(var_st) * rng.gaussian();
  }

  for (std::size_t i = 0; i < n; ++i) {
    // reflect into the band
    while (dev > bound || dev < -bound) {
      if (dev > bound) dev = 2.0 * bound - dev;
      if (dev < -bound) dev = -2.0 * bound - dev;
    }
    series.values_hz.push_back(params.f_nominal_hz + dev);
    dev += -params.reversion_rate * dev * dt + params.volatility * sqrt_dt * rng.gaussian();
  }
  return series;
}

namespace {

// shared by enf_phase and CumulativePhase: integral over the partial step
// [t_k, t] with the series linearly interpolated
double partial_trapezoid(const std::vector<double>& v, double rate, std::size_t k, double dt_frac) {
  if (dt_frac <= 0.0 || k + 1 > v.size()) return 0.0;
  const double dt = dt_frac / rate;
  const double f0 = v[k];
  const double f1 = (k + 1 < v.size()) ? v[k] + dt_frac * (v[k + 1] - v[k]) : v[k];
  return 0.5 * (f0 + f1) * dt;
}

}  // namespace

double enf_phase(const EnfSeries& series, double t_s) {
  if (series.values_hz.empty() || t_s < series.start_time_s || t_s > series.end_time_s()) {
    throw std::out_of_range("enf_phase: t outside series coverage");
  }
  const double pos = (t_s - series.start_time_s) * series.rate_hz;
  const auto k = static_cast<std::size_t>(pos);
  const double dt = 1.0 / series.rate_hz;
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 <= k && i + 1 < series.values_hz.size(); ++i) {
    integral += 0.5 * (series.values_hz[i] + series.values_hz[i + 1]) * dt;
  }
  integral += partial_trapezoid(series.values_hz, series.rate_hz, k, pos - static_cast<double>(k));
  return kTwoPi * integral;
}

CumulativePhase::CumulativePhase(const EnfSeries& series)
    : start_time_s_(series.start_time_s),
      rate_hz_(series.rate_hz),
      values_hz_(series.values_hz) {
  cum_.resize(values_hz_.size(), 0.0);
  const double dt = 1.0 / rate_hz_;
  for (std::size_t i = 1; i < values_hz_.size(); ++i) {
    cum_[i] = cum_[i - 1] + kTwoPi * 0.5 * (values_hz_[i - 1] + values_hz_[i]) * dt;
  }
}

double CumulativePhase::at(double t_s) const {
  const double end = start_time_s_ + (values_hz_.empty() ? 0.0 : static_cast<double>(values_hz_.size() - 1) / rate_hz_);
  if (values_hz_.empty() || t_s < start_time_s_ || t_s > end) {
    throw std::out_of_range("CumulativePhase::at: t outside series coverage");
  }
  const double pos = (t_s - start_time_s_) * rate_hz_;
  auto k = static_cast<std::size_t>(pos);
  if (k >= values_hz_.size()) k = values_hz_.size() - 1;
  return cum_[k] + kTwoPi * partial_trapezoid(values_hz_, rate_hz_, k, pos - static_cast<double>(k));
}

void write_enf_csv(const std::filesystem::path& path, const EnfSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_enf_csv: cannot open " + path.string());
  out << "time_s,freq_hz\n";
  char line[64];
  for (std::size_t i = 0; i < series.values_hz.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.6f,%.6f\n", series.time_of(i), series.values_hz[i]);
    out << line;
  }
}

EnfSeries read_enf_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_enf_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_enf_csv: empty file " + path.string());
  EnfSeries series;
  bool first = true;
  double prev_t = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("read_enf_csv: malformed row: " + line);
    const double t = std::stod(line.substr(0, comma));
    const double f = std::stod(line.substr(comma + 1));
    if (first) {
      series.start_time_s = t;
      first = false;
    } else if (series.values_hz.size() == 1) {
      const double dt = t - prev_t;
      if (!(dt > 0.0)) throw std::runtime_error("read_enf_csv: non-increasing time column");
      series.rate_hz = 1.0 / dt;
    }
    series.values_hz.push_back(f);
    prev_t = t;
  }
  if (series.values_hz.empty()) throw std::runtime_error("read_enf_csv: no samples in " + path.string());
  return series;
}

}  // namespace enfsim
