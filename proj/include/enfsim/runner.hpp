#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "enfsim/config.hpp"
#include "enfsim/detector.hpp"
#include "enfsim/labels.hpp"

namespace enfsim {

struct StageTiming {
  std::string stage;
  double wall_s = 0.0;
};

// Record of one run: config snapshot, the artifact paths it produced, and
// per-stage wall clock. The eight primary artifacts of a full attacked run
// are live FSEQ/WAV, reference ENF CSV, attacked FSEQ/WAV, event log, and the
// two per-path detection CSVs; extracted ENF CSVs and the merged report ride
// in their own fields.
struct RunManifest {
  std::string version;
  nlohmann::json config_snapshot() const;
  std::string config_json;  // serialized snapshot
  std::vector<std::pair<std::string, std::string>> artifacts;
  std::vector<std::pair<std::string, std::string>> extras;
  std::string report_path;
  std::vector<StageTiming> timings;

  void add_artifact(const std::string& name, const std::filesystem::path& p);
  void add_extra(const std::string& name, const std::filesystem::path& p);
  nlohmann::json to_json() const;
  void save(const std::filesystem::path& path) const;
  // every listed artifact exists and parses in its format
  void validate_artifacts() const;
};

struct SynthOutputs {
  std::filesystem::path fseq;
  std::filesystem::path wav;
  std::filesystem::path enf_csv;
};

struct AttackOutputs {
  std::filesystem::path fseq;
  std::filesystem::path wav;
  std::filesystem::path event_log;
  std::vector<AttackLogEvent> events;
};

struct PathDetection {
  EstimatedEnf extracted;
  std::vector<DetectionWindow> windows;
  std::vector<TamperInterval> intervals;
  Verdict verdict = Verdict::indeterminate;
  bool present = false;  // the media for this path existed
};

struct DetectOutputs {
  std::filesystem::path enf_audio_csv;
  std::filesystem::path enf_video_csv;
  std::filesystem::path detect_audio_csv;
  std::filesystem::path detect_video_csv;
  std::filesystem::path report;
  PathDetection audio;
  PathDetection video;
  Verdict merged = Verdict::indeterminate;
  std::vector<TamperInterval> merged_intervals;
  bool reference_gap_warning = false;
};

SynthOutputs run_synth(const ExperimentConfig& cfg, RunManifest& manifest);

AttackOutputs run_attack(const ExperimentConfig& cfg, const std::filesystem::path& live_fseq,
                         const std::filesystem::path& live_wav, RunManifest& manifest);

DetectOutputs run_detect(const ExperimentConfig& cfg,
                         const std::optional<std::filesystem::path>& fseq,
                         const std::optional<std::filesystem::path>& wav,
                         const std::filesystem::path& reference_csv, RunManifest& manifest);

// synth -> attack (unless skipped) -> detect; writes manifest.json in out_dir
RunManifest run_all(const ExperimentConfig& cfg);

// merged verdict: tampered if either path flags; authentic if at least one
// path is authentic and none tampered; indeterminate otherwise
Verdict merge_verdicts(const PathDetection& audio, const PathDetection& video);

// ENF padded past the media so phase interpolation never runs off the end
EnfSeries synth_reference(const ExperimentConfig& cfg);

// ---- in-memory pipeline (no container files), used by the heavy test
// corpus and the ROC sweep ----

struct ScenarioOutcome {
  EnfSeries reference;
  std::vector<AttackLogEvent> events;
  PathDetection audio;
  PathDetection video;
  Verdict merged = Verdict::indeterminate;
  std::vector<std::pair<double, double>> replay_intervals;
  double attack_wall_s = 0.0;   // gate+FSM time only, for throughput checks
  double media_duration_s = 0.0;
};

ScenarioOutcome simulate_scenario(const ExperimentConfig& cfg);

// ground-truth-labeled windows for roc_sweep
LabeledWindows label_windows(const std::vector<DetectionWindow>& windows, const LabelTrack& labels);

// the 20-scenario evaluation corpus (n_clean clean + n_attacked attacked,
// replay material recorded >= 60 s before the splice)
std::vector<ExperimentConfig> default_corpus(int n_clean, int n_attacked,
                                             std::uint64_t base_seed = 100);

}  // namespace enfsim
