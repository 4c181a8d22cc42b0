#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "enfsim/enf.hpp"
#include "enfsim/extract.hpp"

namespace enfsim {

// Sliding-window Pearson correlation between the extracted series and the
// grid reference. Windows whose correlation drops under the threshold are
// tampered; windows without enough usable samples (or an undefined
// correlation) are indeterminate, never tampered.
struct DetectorParams {
  int window_len = 30;         // ENF samples
  int hop = 5;                 // samples
  double rho_threshold = 0.7;
  double min_confidence = 0.3;
  double nominal_hz = 60.0;    // subtracted before correlating

  void validate() const;
};

enum class Verdict { authentic, tampered, indeterminate };
const char* to_string(Verdict v);

struct DetectionWindow {
  double start_s = 0.0;
  double end_s = 0.0;   // start + window_len / rate
  double rho = 0.0;     // meaningless when indeterminate
  Verdict verdict = Verdict::indeterminate;
  int usable = 0;       // samples that entered the correlation
};

// The "power recording": continuous reference coverage, indexable by time.
class ReferenceDb {
 public:
  explicit ReferenceDb(EnfSeries series);

  std::optional<double> value_at(double t) const;  // nullopt on a coverage gap
  const EnfSeries& series() const { return series_; }

 private:
  EnfSeries series_;
};

// Online detector; emission latency is bounded by one hop (window i is
// emitted by the push() call that delivers its last sample).
class SlidingDetector {
 public:
  SlidingDetector(ReferenceDb ref, DetectorParams params, double sample_rate_hz);

  std::vector<DetectionWindow> push(const EnfSample& sample);
  std::vector<DetectionWindow> push_series(const EstimatedEnf& est);

 private:
  DetectionWindow evaluate(std::size_t window_start_index) const;

  ReferenceDb ref_;
  DetectorParams params_;
  double rate_hz_;
  std::vector<EnfSample> buf_;   // bounded: window_len + hop
  std::int64_t buf_start_ = 0;   // absolute index of buf_[0]
  std::int64_t next_window_ = 0;
};

std::vector<DetectionWindow> slide(const EstimatedEnf& extracted, const ReferenceDb& ref,
                                   const DetectorParams& params);

struct TamperInterval {
  double onset_s = 0.0;
  double end_s = 0.0;
};

// Merges maximal runs of tampered windows; runs separated by fewer than two
// hops of non-tampered windows coalesce.
std::vector<TamperInterval> localize(std::span<const DetectionWindow> windows,
                                     const DetectorParams& params);

// One labeled scenario's worth of windows for the ROC sweep: rho/usable stay
// fixed, the threshold is re-applied per sweep point.
struct LabeledWindows {
  std::vector<DetectionWindow> windows;
  std::vector<std::uint8_t> truth_tampered;  // majority ground-truth label
};

struct RocPoint {
  double threshold = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
};

std::vector<RocPoint> roc_sweep(std::span<const LabeledWindows> scenarios,
                                std::span<const double> thresholds);

// CSV: start_s,end_s,rho,verdict
void write_detection_csv(const std::filesystem::path& path,
                         std::span<const DetectionWindow> windows);
std::vector<DetectionWindow> read_detection_csv(const std::filesystem::path& path);

}  // namespace enfsim
