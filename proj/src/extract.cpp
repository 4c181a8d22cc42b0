#include "enfsim/extract.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace enfsim {

void ExtractionParams::validate(double sample_rate_hz) const {
  if (!(nominal_hz > 0.0)) throw std::invalid_argument("ExtractionParams: nominal must be > 0");
  if (harmonic < 1) throw std::invalid_argument("ExtractionParams: harmonic must be >= 1");
  if (!(stft_hop_s > 0.0) || stft_frame_s < stft_hop_s) {
    throw std::invalid_argument("ExtractionParams: require stft_frame >= stft_hop > 0");
  }
  const double lo = band_center_hz() - halfwidth();
  const double hi = band_center_hz() + halfwidth();
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("ExtractionParams: empty search band");
  if (hi >= sample_rate_hz / 2.0) {
    throw unsupported_configuration("ExtractionParams: search band reaches Nyquist (" +
                                    std::to_string(hi) + " Hz vs fs/2 = " +
                                    std::to_string(sample_rate_hz / 2.0) + " Hz)");
  }
}

void EstimatedEnf::push_back(const EnfSample& s) {
  if (series.values_hz.empty()) {
    series.start_time_s = s.time_s;
  }
  series.values_hz.push_back(s.value_hz);
  confidence.push_back(s.confidence);
  flagged.push_back(s.flagged ? 1 : 0);
}

double peak_confidence(double peak_magnitude, double floor_mean_magnitude) {
  if (!(peak_magnitude > 0.0)) return 0.0;
  const double floor = std::max(floor_mean_magnitude, peak_magnitude * 1e-12);
  const double r = peak_magnitude / floor;
  return r * r / (r * r + 50.0);
}

EnfEstimator::EnfEstimator(ExtractionParams params, double sample_rate_hz, double start_time_s)
    : params_(std::move(params)), sample_rate_hz_(sample_rate_hz), start_time_s_(start_time_s) {
  params_.validate(sample_rate_hz_);
  frame_len_ = static_cast<std::size_t>(std::llround(params_.stft_frame_s * sample_rate_hz_));
  hop_len_ = static_cast<std::size_t>(std::llround(params_.stft_hop_s * sample_rate_hz_));
  if (frame_len_ == 0 || hop_len_ == 0) {
    throw std::invalid_argument("EnfEstimator: frame/hop below one sample");
  }
  window_ = make_window(params_.window, frame_len_);
}

EnfSample EnfEstimator::analyze(std::span<const double> frame) const {
  std::vector<double> buf(frame_len_);
  for (std::size_t i = 0; i < frame_len_; ++i) buf[i] = frame[i] * window_[i];
  const auto spec = dft(buf, sample_rate_hz_);
  const double df = sample_rate_hz_ / static_cast<double>(frame_len_);

  const double center = params_.band_center_hz();
  const double hw = params_.halfwidth();
  auto lo_bin = static_cast<std::size_t>(std::max<double>(1.0, std::ceil((center - hw) / df)));
  auto hi_bin = static_cast<std::size_t>(std::floor((center + hw) / df));
  const std::size_t last_usable = frame_len_ / 2 >= 2 ? frame_len_ / 2 - 1 : 1;
  hi_bin = std::min(hi_bin, last_usable);
  if (lo_bin > hi_bin) lo_bin = hi_bin;

  std::size_t peak = lo_bin;
  double peak_mag = 0.0;
  for (std::size_t k = lo_bin; k <= hi_bin; ++k) {
    const double m = std::abs(spec.bins[k]);
    if (m > peak_mag) {
      peak_mag = m;
      peak = k;
    }
  }

  EnfSample out;
  if (peak_mag <= 0.0) {
    out.value_hz = params_.nominal_hz;
    out.confidence = 0.0;
    out.flagged = true;
    return out;
  }

  // quadratic (three-point log-magnitude) sub-bin refinement
  double delta = 0.0;
  const double m_prev = std::abs(spec.bins[peak - 1]);
  const double m_next = std::abs(spec.bins[peak + 1]);
  if (m_prev > 0.0 && m_next > 0.0) {
    const double lp = std::log(m_prev), l0 = std::log(peak_mag), ln = std::log(m_next);
    const double denom = lp - 2.0 * l0 + ln;
    if (denom < 0.0) delta = 0.5 * (lp - ln) / denom;
    delta = std::clamp(delta, -0.5, 0.5);
  }

  double value = (static_cast<double>(peak) + delta) * df / params_.harmonic;
  const double lo_grid = (center - hw) / params_.harmonic;
  const double hi_grid = (center + hw) / params_.harmonic;
  bool flagged = false;
  if (value < lo_grid) {
    value = lo_grid;
    flagged = true;
  } else if (value > hi_grid) {
    value = hi_grid;
    flagged = true;
  }

  // floor: everything within +/-2 Hz of the band center except the peak's
  // main lobe; the ratio to the peak is the quality measure
  double floor_acc = 0.0;
  std::size_t floor_n = 0;
  const auto floor_lo = static_cast<std::size_t>(std::max<double>(1.0, std::ceil((center - 2.0) / df)));
  const auto floor_hi = std::min(static_cast<std::size_t>(std::floor((center + 2.0) / df)), last_usable);
  for (std::size_t k = floor_lo; k <= floor_hi; ++k) {
    if (k + 1 >= peak && k <= peak + 1) continue;  // peak bin and direct neighbors
    floor_acc += std::abs(spec.bins[k]);
    ++floor_n;
  }
  out.value_hz = value;
  out.confidence = floor_n > 0 ? peak_confidence(peak_mag, floor_acc / static_cast<double>(floor_n))
                               : peak_confidence(peak_mag, 0.0);
  out.flagged = flagged;
  return out;
}

std::vector<EnfSample> EnfEstimator::push(std::span<const double> samples) {
  buf_.insert(buf_.end(), samples.begin(), samples.end());
  std::vector<EnfSample> out;
  for (;;) {
    const std::int64_t frame_start = next_frame_ * static_cast<std::int64_t>(hop_len_);
    const std::int64_t available_end = buf_start_ + static_cast<std::int64_t>(buf_.size());
    if (frame_start + static_cast<std::int64_t>(frame_len_) > available_end) break;
    const auto offset = static_cast<std::size_t>(frame_start - buf_start_);
    EnfSample s = analyze(std::span<const double>(buf_.data() + offset, frame_len_));
    s.time_s = start_time_s_ + static_cast<double>(frame_start) / sample_rate_hz_ +
               params_.stft_frame_s / 2.0;
    out.push_back(s);
    ++next_frame_;
    // drop samples no later frame needs
    const std::int64_t next_start = next_frame_ * static_cast<std::int64_t>(hop_len_);
    if (next_start > buf_start_) {
      const auto drop = static_cast<std::size_t>(next_start - buf_start_);
      if (drop >= buf_.size()) {
        buf_start_ += static_cast<std::int64_t>(buf_.size());
        buf_.clear();
      } else {
        buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(drop));
        buf_start_ = next_start;
      }
    }
  }
  return out;
}

EstimatedEnf estimate_enf_audio(std::span<const double> samples, double sample_rate_hz,
                                const ExtractionParams& params, double start_time_s) {
  EnfEstimator est(params, sample_rate_hz, start_time_s);
  EstimatedEnf out;
  out.series.rate_hz = 1.0 / params.stft_hop_s;
  for (const auto& s : est.push(samples)) out.push_back(s);
  return out;
}

EstimatedEnf estimate_enf_audio(std::span<const AudioBlock> stream, const ExtractionParams& params) {
  if (stream.empty()) return {};
  EnfEstimator est(params, stream.front().sample_rate_hz,
                   static_cast<double>(stream.front().start_offset) / stream.front().sample_rate_hz);
  EstimatedEnf out;
  out.series.rate_hz = 1.0 / params.stft_hop_s;
  std::vector<double> tmp;
  for (const auto& block : stream) {
    tmp.assign(block.samples.begin(), block.samples.end());
    for (const auto& s : est.push(tmp)) out.push_back(s);
  }
  return out;
}

VideoEnfEstimator::VideoEnfEstimator(const CameraParams& cam, const ExtractionParams& params)
    : est_(params, cam.fps() * cam.height, 0.0), row_rate_hz_(cam.fps() * cam.height) {}

std::vector<EnfSample> VideoEnfEstimator::push(const Frame& f) {
  const int w = f.width, h = f.height;
  row_means_.resize(h);
  double frame_mean = 0.0;
  for (int r = 0; r < h; ++r) {
    const float* row = &f.pixels[static_cast<std::size_t>(r) * w];
    double acc = 0.0;
    for (int c = 0; c < w; ++c) acc += row[c];
    row_means_[r] = acc / w;
    frame_mean += row_means_[r];
  }
  frame_mean /= h;

  // nonuniform (row time, mean) -> linear resample onto the uniform row grid
  resampled_.clear();
  for (int r = 0; r < h; ++r) {
    const double t = f.row_time(r);
    const double v = row_means_[r] - frame_mean;
    if (have_prev_ && t > prev_t_) {
      for (;; ++next_grid_) {
        const double tg = static_cast<double>(next_grid_) / row_rate_hz_;
        if (tg > t) break;
        if (tg < prev_t_) continue;
        resampled_.push_back(prev_v_ + (v - prev_v_) * (tg - prev_t_) / (t - prev_t_));
      }
    } else if (!have_prev_) {
      // align the grid with the first available row
      next_grid_ = static_cast<std::int64_t>(std::ceil(t * row_rate_hz_ - 1e-9));
      const double tg = static_cast<double>(next_grid_) / row_rate_hz_;
      if (std::abs(tg - t) < 1e-9) {
        resampled_.push_back(v);
        ++next_grid_;
      }
    }
    prev_t_ = t;
    prev_v_ = v;
    have_prev_ = true;
  }
  return est_.push(resampled_);
}

EstimatedEnf estimate_enf_video(FrameSource& frames, const CameraParams& cam,
                                const ExtractionParams& params) {
  VideoEnfEstimator est(cam, params);
  EstimatedEnf out;
  out.series.rate_hz = 1.0 / params.stft_hop_s;
  std::optional<Frame> f;
  while ((f = frames.next())) {
    for (const auto& s : est.push(*f)) out.push_back(s);
  }
  return out;
}

void write_extracted_csv(const std::filesystem::path& path, const EstimatedEnf& est) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_extracted_csv: cannot open " + path.string());
  out << "time_s,freq_hz,confidence\n";
  char line[96];
  for (std::size_t i = 0; i < est.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.6f,%.6f,%.6f\n", est.series.time_of(i),
                  est.series.values_hz[i], est.confidence[i]);
    out << line;
  }
}

EstimatedEnf read_extracted_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_extracted_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_extracted_csv: empty file");
  EstimatedEnf est;
  bool first = true;
  double prev_t = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw std::runtime_error("read_extracted_csv: malformed row: " + line);
    }
    const double t = std::stod(line.substr(0, c1));
    const double v = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    const double conf = std::stod(line.substr(c2 + 1));
    if (first) {
      est.series.start_time_s = t;
      first = false;
    } else if (est.series.values_hz.size() == 1) {
      est.series.rate_hz = 1.0 / (t - prev_t);
    }
    est.series.values_hz.push_back(v);
    est.confidence.push_back(conf);
    est.flagged.push_back(0);
    prev_t = t;
  }
  return est;
}

}  // namespace enfsim
