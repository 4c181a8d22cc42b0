#include "enfsim/detector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "enfsim/stats.hpp"

namespace enfsim {

void DetectorParams::validate() const {
  if (window_len <= 2) throw std::invalid_argument("DetectorParams: window_len must be > 2");
  if (hop <= 0 || hop > window_len) throw std::invalid_argument("DetectorParams: require 0 < hop <= window_len");
  if (rho_threshold <= -1.0 || rho_threshold >= 1.0) {
    throw std::invalid_argument("DetectorParams: rho_threshold must be in (-1, 1)");
  }
  if (min_confidence < 0.0 || min_confidence > 1.0) {
    throw std::invalid_argument("DetectorParams: min_confidence must be in [0, 1]");
  }
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::authentic: return "authentic";
    case Verdict::tampered: return "tampered";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

ReferenceDb::ReferenceDb(EnfSeries series) : series_(std::move(series)) {
  if (series_.values_hz.empty()) throw std::invalid_argument("ReferenceDb: empty series");
}

std::optional<double> ReferenceDb::value_at(double t) const {
  if (!series_.covers(t)) return std::nullopt;
  return series_.value_at(t);
}

SlidingDetector::SlidingDetector(ReferenceDb ref, DetectorParams params, double sample_rate_hz)
    : ref_(std::move(ref)), params_(std::move(params)), rate_hz_(sample_rate_hz) {
  params_.validate();
  if (!(rate_hz_ > 0.0)) throw std::invalid_argument("SlidingDetector: sample rate must be > 0");
}

DetectionWindow SlidingDetector::evaluate(std::size_t offset) const {
  DetectionWindow w;
  const auto len = static_cast<std::size_t>(params_.window_len);
  w.start_s = buf_[offset].time_s;
  w.end_s = w.start_s + params_.window_len / rate_hz_;

  std::vector<double> x, y;
  x.reserve(len);
  y.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    const EnfSample& s = buf_[offset + i];
    if (s.flagged || s.confidence < params_.min_confidence) continue;
    const auto ref = ref_.value_at(s.time_s);
    if (!ref) continue;
    x.push_back(s.value_hz - params_.nominal_hz);
    y.push_back(*ref - params_.nominal_hz);
  }
  w.usable = static_cast<int>(x.size());
  if (w.usable < params_.window_len / 2 || w.usable < 2) {
    w.verdict = Verdict::indeterminate;
    return w;
  }
  try {
    w.rho = pearson(x, y);
  } catch (const undefined_correlation&) {
    w.verdict = Verdict::indeterminate;
    return w;
  }
  w.verdict = w.rho < params_.rho_threshold ? Verdict::tampered : Verdict::authentic;
  return w;
}

std::vector<DetectionWindow> SlidingDetector::push(const EnfSample& sample) {
  buf_.push_back(sample);
  std::vector<DetectionWindow> out;
  for (;;) {
    const std::int64_t win_start = next_window_ * params_.hop;
    const std::int64_t have_end = buf_start_ + static_cast<std::int64_t>(buf_.size());
    if (win_start + params_.window_len > have_end) break;
    out.push_back(evaluate(static_cast<std::size_t>(win_start - buf_start_)));
    ++next_window_;
    const std::int64_t next_start = next_window_ * params_.hop;
    if (next_start > buf_start_) {
      const auto drop = std::min<std::size_t>(static_cast<std::size_t>(next_start - buf_start_), buf_.size());
      buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(drop));
      buf_start_ += static_cast<std::int64_t>(drop);
    }
  }
  return out;
}

std::vector<DetectionWindow> SlidingDetector::push_series(const EstimatedEnf& est) {
  std::vector<DetectionWindow> out;
  for (std::size_t i = 0; i < est.size(); ++i) {
    EnfSample s;
    s.time_s = est.series.time_of(i);
    s.value_hz = est.series.values_hz[i];
    s.confidence = est.confidence[i];
    s.flagged = est.flagged[i] != 0;
    auto produced = push(s);
    out.insert(out.end(), produced.begin(), produced.end());
  }
  return out;
}

std::vector<DetectionWindow> slide(const EstimatedEnf& extracted, const ReferenceDb& ref,
                                   const DetectorParams& params) {
  SlidingDetector det(ref, params, extracted.series.rate_hz);
  return det.push_series(extracted);
}

std::vector<TamperInterval> localize(std::span<const DetectionWindow> windows,
                                     const DetectorParams& params) {
  std::vector<TamperInterval> out;
  if (windows.empty()) return out;

  // hop in seconds, recovered from the window geometry
  const double span_s = windows.front().end_s - windows.front().start_s;
  const double hop_s = span_s * params.hop / params.window_len;
  const double merge_gap_s = 2.0 * hop_s;

  std::optional<TamperInterval> open;
  double last_tampered_start = 0.0;
  for (const auto& w : windows) {
    if (w.verdict != Verdict::tampered) continue;
    if (open && w.start_s - last_tampered_start <= merge_gap_s + 1e-9) {
      open->end_s = w.end_s;
    } else {
      if (open) out.push_back(*open);
      open = TamperInterval{w.start_s, w.end_s};
    }
    last_tampered_start = w.start_s;
  }
  if (open) out.push_back(*open);
  return out;
}

std::vector<RocPoint> roc_sweep(std::span<const LabeledWindows> scenarios,
                                std::span<const double> thresholds) {
  if (scenarios.empty()) throw std::invalid_argument("roc_sweep: empty scenario corpus");
  std::vector<RocPoint> out;
  for (double thr : thresholds) {
    std::int64_t tp = 0, fn = 0, fp = 0, tn = 0;
    for (const auto& sc : scenarios) {
      for (std::size_t i = 0; i < sc.windows.size(); ++i) {
        const auto& w = sc.windows[i];
        // indeterminate windows never flag at any threshold
        const bool flagged = w.verdict != Verdict::indeterminate && w.rho < thr;
        const bool truth = sc.truth_tampered[i] != 0;
        if (truth) {
          flagged ? ++tp : ++fn;
        } else {
          flagged ? ++fp : ++tn;
        }
      }
    }
    RocPoint p;
    p.threshold = thr;
    p.tpr = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    p.fpr = fp + tn > 0 ? static_cast<double>(fp) / static_cast<double>(fp + tn) : 0.0;
    out.push_back(p);
  }
  return out;
}

void write_detection_csv(const std::filesystem::path& path,
                         std::span<const DetectionWindow> windows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_detection_csv: cannot open " + path.string());
  out << "start_s,end_s,rho,verdict\n";
  char buf[96];
  for (const auto& w : windows) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,", w.start_s, w.end_s, w.rho);
    out << buf << to_string(w.verdict) << '\n';
  }
}

std::vector<DetectionWindow> read_detection_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_detection_csv: cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<DetectionWindow> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    DetectionWindow w;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const auto c3 = line.find(',', c2 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos || c3 == std::string::npos) {
      throw std::runtime_error("read_detection_csv: malformed row: " + line);
    }
    w.start_s = std::stod(line.substr(0, c1));
    w.end_s = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    w.rho = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
    const auto v = line.substr(c3 + 1);
    if (v == "authentic") w.verdict = Verdict::authentic;
    else if (v == "tampered") w.verdict = Verdict::tampered;
    else if (v == "indeterminate") w.verdict = Verdict::indeterminate;
    else throw std::runtime_error("read_detection_csv: unknown verdict '" + v + "'");
    out.push_back(w);
  }
  return out;
}

}  // namespace enfsim
