#include "enfsim/runner.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <nlohmann/json.hpp>

#include "enfsim/fseq.hpp"
#include "enfsim/render.hpp"
#include "enfsim/version.hpp"
#include "enfsim/wav.hpp"

namespace enfsim {

namespace {

class StageClock {
 public:
  explicit StageClock(RunManifest& m) : manifest_(m) {}
  template <typename F>
  auto time(const std::string& stage, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record(stage, t0);
    } else {
      auto result = fn();
      record(stage, t0);
      return result;
    }
  }

 private:
  void record(const std::string& stage, std::chrono::steady_clock::time_point t0) {
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest_.timings.push_back({stage, dt});
  }
  RunManifest& manifest_;
};

Verdict path_verdict(const std::vector<DetectionWindow>& windows) {
  bool any_tampered = false, any_authentic = false;
  for (const auto& w : windows) {
    if (w.verdict == Verdict::tampered) any_tampered = true;
    if (w.verdict == Verdict::authentic) any_authentic = true;
  }
  if (any_tampered) return Verdict::tampered;
  if (any_authentic) return Verdict::authentic;
  return Verdict::indeterminate;
}

std::vector<TamperInterval> merge_interval_union(std::vector<TamperInterval> a,
                                                 const std::vector<TamperInterval>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end(), [](const auto& x, const auto& y) { return x.onset_s < y.onset_s; });
  std::vector<TamperInterval> out;
  for (const auto& iv : a) {
    if (!out.empty() && iv.onset_s <= out.back().end_s) {
      out.back().end_s = std::max(out.back().end_s, iv.end_s);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

PathDetection detect_on_series(EstimatedEnf est, const ReferenceDb& ref, const DetectorParams& params) {
  PathDetection d;
  d.present = true;
  d.windows = slide(est, ref, params);
  d.intervals = localize(d.windows, params);
  d.verdict = path_verdict(d.windows);
  d.extracted = std::move(est);
  return d;
}

nlohmann::json intervals_to_json(const std::vector<TamperInterval>& ivs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& iv : ivs) out.push_back({{"onset_s", iv.onset_s}, {"end_s", iv.end_s}});
  return out;
}

nlohmann::json path_to_json(const PathDetection& d, const std::string& enf_csv,
                            const std::string& detect_csv) {
  if (!d.present) return {{"present", false}};
  int tampered = 0, authentic = 0, indeterminate = 0;
  for (const auto& w : d.windows) {
    if (w.verdict == Verdict::tampered) ++tampered;
    else if (w.verdict == Verdict::authentic) ++authentic;
    else ++indeterminate;
  }
  return {{"present", true},
          {"verdict", to_string(d.verdict)},
          {"windows", {{"total", d.windows.size()},
                       {"tampered", tampered},
                       {"authentic", authentic},
                       {"indeterminate", indeterminate}}},
          {"intervals", intervals_to_json(d.intervals)},
          {"extracted_csv", enf_csv},
          {"detection_csv", detect_csv}};
}

}  // namespace

void RunManifest::add_artifact(const std::string& name, const std::filesystem::path& p) {
  artifacts.emplace_back(name, p.string());
}

void RunManifest::add_extra(const std::string& name, const std::filesystem::path& p) {
  extras.emplace_back(name, p.string());
}

nlohmann::json RunManifest::config_snapshot() const {
  return config_json.empty() ? nlohmann::json{} : nlohmann::json::parse(config_json);
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json arts = nlohmann::json::array();
  for (const auto& [name, path] : artifacts) arts.push_back({{"name", name}, {"path", path}});
  nlohmann::json ext = nlohmann::json::array();
  for (const auto& [name, path] : extras) ext.push_back({{"name", name}, {"path", path}});
  nlohmann::json times = nlohmann::json::array();
  for (const auto& t : timings) times.push_back({{"stage", t.stage}, {"wall_s", t.wall_s}});
  return {{"schema_version", 1},
          {"version", version},
          {"config", config_snapshot()},
          {"artifacts", arts},
          {"extras", ext},
          {"report", report_path},
          {"timings", times}};
}

void RunManifest::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("RunManifest: cannot write " + path.string());
  out << to_json().dump(2) << "\n";
}

void RunManifest::validate_artifacts() const {
  auto check_one = [](const std::string& name, const std::filesystem::path& p) {
    if (!std::filesystem::exists(p)) {
      throw std::runtime_error("manifest artifact missing: " + name + " -> " + p.string());
    }
    const auto ext = p.extension().string();
    if (ext == ".fseq") {
      validate_fseq(p);
    } else if (ext == ".wav") {
      validate_wav(p);
    } else if (ext == ".csv") {
      if (name.find("detect") != std::string::npos) {
        read_detection_csv(p);
      } else if (name.find("event") != std::string::npos) {
        read_event_log_csv(p);
      } else if (name.find("extracted") != std::string::npos) {
        read_extracted_csv(p);
      } else {
        read_enf_csv(p);
      }
    } else if (ext == ".json") {
      std::ifstream in(p);
      nlohmann::json j;
      in >> j;
    }
  };
  for (const auto& [name, path] : artifacts) check_one(name, path);
  for (const auto& [name, path] : extras) check_one(name, path);
  if (!report_path.empty()) check_one("report", report_path);
}

EnfSeries synth_reference(const ExperimentConfig& cfg) {
  // pad past the media end so row/sample phase interpolation stays covered
  const double pad = 2.0 / cfg.grid.sample_rate_enf_hz;
  return synth_enf(cfg.grid, cfg.script.duration_s + pad, cfg.seeds.enf);
}

SynthOutputs run_synth(const ExperimentConfig& cfg, RunManifest& manifest) {
  StageClock clock(manifest);
  std::filesystem::create_directories(cfg.out_dir);
  SynthOutputs out;
  out.fseq = cfg.out_dir / "live.fseq";
  out.wav = cfg.out_dir / "live.wav";
  out.enf_csv = cfg.out_dir / "reference_enf.csv";

  const EnfSeries enf = clock.time("synth_enf", [&] { return synth_reference(cfg); });
  write_enf_csv(out.enf_csv, enf);

  clock.time("render_video", [&] {
    FrameRenderer renderer(cfg.script, enf, cfg.camera, cfg.seeds.noise);
    FseqWriter writer(out.fseq, cfg.camera);
    while (auto f = renderer.next()) writer.write(*f);
    writer.close();
  });

  clock.time("render_audio", [&] {
    AudioRenderer renderer(cfg.script, enf, cfg.camera, cfg.seeds.noise);
    std::vector<float> samples;
    samples.reserve(static_cast<std::size_t>(renderer.total_samples()));
    while (auto b = renderer.next()) samples.insert(samples.end(), b->samples.begin(), b->samples.end());
    write_wav(out.wav, samples, static_cast<std::uint32_t>(cfg.camera.audio_sample_rate_hz));
  });

  manifest.add_artifact("live_fseq", out.fseq);
  manifest.add_artifact("live_wav", out.wav);
  manifest.add_artifact("reference_enf_csv", out.enf_csv);
  return out;
}

AttackOutputs run_attack(const ExperimentConfig& cfg, const std::filesystem::path& live_fseq,
                         const std::filesystem::path& live_wav, RunManifest& manifest) {
  StageClock clock(manifest);
  std::filesystem::create_directories(cfg.out_dir);
  AttackOutputs out;
  out.fseq = cfg.out_dir / "attacked.fseq";
  out.wav = cfg.out_dir / "attacked.wav";
  out.event_log = cfg.out_dir / "attack_events.csv";

  clock.time("attack", [&] {
    FseqReader reader(live_fseq);
    const WavData wav = read_wav(live_wav);

    CameraParams cam = reader.camera();
    cam.audio_sample_rate_hz = wav.sample_rate_hz;
    cam.hum_harmonics = cfg.camera.hum_harmonics;

    FseqWriter writer(out.fseq, reader.header());
    std::vector<float> out_audio;
    out_audio.reserve(wav.samples.size());

    std::vector<double> manual;
    for (const auto& m : cfg.script.manual_triggers) manual.push_back(m.time_s);

    AttackPipeline pipeline(cfg.attack, cam, cfg.gate_threads);
    AttackPipeline::Sinks sinks;
    sinks.frame = [&](const Frame& f) { writer.write(f); };
    sinks.audio = [&](std::span<const float> a) { out_audio.insert(out_audio.end(), a.begin(), a.end()); };
    out.events = pipeline.run(reader, wav.samples, manual, sinks);
    writer.close();
    write_wav(out.wav, out_audio, wav.sample_rate_hz);
    write_event_log_csv(out.event_log, out.events);
  });

  manifest.add_artifact("attacked_fseq", out.fseq);
  manifest.add_artifact("attacked_wav", out.wav);
  manifest.add_artifact("attack_event_log", out.event_log);
  return out;
}

DetectOutputs run_detect(const ExperimentConfig& cfg,
                         const std::optional<std::filesystem::path>& fseq,
                         const std::optional<std::filesystem::path>& wav,
                         const std::filesystem::path& reference_csv, RunManifest& manifest) {
  StageClock clock(manifest);
  std::filesystem::create_directories(cfg.out_dir);
  DetectOutputs out;
  out.enf_audio_csv = cfg.out_dir / "extracted_enf_audio.csv";
  out.enf_video_csv = cfg.out_dir / "extracted_enf_video.csv";
  out.detect_audio_csv = cfg.out_dir / "detect_audio.csv";
  out.detect_video_csv = cfg.out_dir / "detect_video.csv";
  out.report = cfg.out_dir / "report.json";

  EnfSeries reference = read_enf_csv(reference_csv);
  if (cfg.reference_noise_sigma > 0.0) {
    Rng rng(cfg.seeds.noise ^ 0x5ef17ebbULL);
    for (auto& v : reference.values_hz) v += cfg.reference_noise_sigma * rng.gaussian();
  }
  const ReferenceDb ref(reference);

  if (wav) {
    clock.time("extract_audio", [&] {
      const WavData data = read_wav(*wav);
      std::vector<double> samples(data.samples.begin(), data.samples.end());
      out.audio = detect_on_series(
          estimate_enf_audio(samples, data.sample_rate_hz, cfg.extract_audio), ref, cfg.detector);
      write_extracted_csv(out.enf_audio_csv, out.audio.extracted);
      write_detection_csv(out.detect_audio_csv, out.audio.windows);
    });
    manifest.add_artifact("detect_audio_csv", out.detect_audio_csv);
    manifest.add_extra("extracted_enf_audio_csv", out.enf_audio_csv);
  }
  if (fseq) {
    clock.time("extract_video", [&] {
      FseqReader reader(*fseq);
      out.video = detect_on_series(estimate_enf_video(reader, reader.camera(), cfg.extract_video),
                                   ref, cfg.detector);
      write_extracted_csv(out.enf_video_csv, out.video.extracted);
      write_detection_csv(out.detect_video_csv, out.video.windows);
    });
    manifest.add_artifact("detect_video_csv", out.detect_video_csv);
    manifest.add_extra("extracted_enf_video_csv", out.enf_video_csv);
  }

  // partial coverage shows up as indeterminate windows; surface a warning
  auto has_gap = [&](const PathDetection& d) {
    if (!d.present || d.extracted.size() == 0) return false;
    return !reference.covers(d.extracted.series.start_time_s) ||
           !reference.covers(d.extracted.series.end_time_s());
  };
  out.reference_gap_warning = has_gap(out.audio) || has_gap(out.video);

  out.merged = merge_verdicts(out.audio, out.video);
  out.merged_intervals = merge_interval_union(out.audio.intervals, out.video.intervals);

  nlohmann::json report = {
      {"schema_version", 1},
      {"version", kVersion},
      {"scenario", cfg.scenario},
      {"verdict", to_string(out.merged)},
      {"intervals", intervals_to_json(out.merged_intervals)},
      {"audio_path", path_to_json(out.audio, out.enf_audio_csv.string(), out.detect_audio_csv.string())},
      {"video_path", path_to_json(out.video, out.enf_video_csv.string(), out.detect_video_csv.string())},
      {"detector",
       {{"window_len", cfg.detector.window_len},
        {"hop", cfg.detector.hop},
        {"rho_threshold", cfg.detector.rho_threshold},
        {"min_confidence", cfg.detector.min_confidence},
        {"note", "window/threshold values are corpus-calibrated, not paper-published"}}},
      {"warnings", nlohmann::json::array()},
  };
  if (out.reference_gap_warning) {
    report["warnings"].push_back("reference coverage gap: some windows are indeterminate");
  }
  {
    nlohmann::json times = nlohmann::json::array();
    for (const auto& t : manifest.timings) times.push_back({{"stage", t.stage}, {"wall_s", t.wall_s}});
    report["timings"] = times;
  }
  std::ofstream rep(out.report, std::ios::binary);
  rep << report.dump(2) << "\n";
  manifest.report_path = out.report.string();
  return out;
}

Verdict merge_verdicts(const PathDetection& audio, const PathDetection& video) {
  if ((audio.present && audio.verdict == Verdict::tampered) ||
      (video.present && video.verdict == Verdict::tampered)) {
    return Verdict::tampered;
  }
  if ((audio.present && audio.verdict == Verdict::authentic) ||
      (video.present && video.verdict == Verdict::authentic)) {
    return Verdict::authentic;
  }
  return Verdict::indeterminate;
}

RunManifest run_all(const ExperimentConfig& cfg) {
  RunManifest manifest;
  manifest.version = kVersion;
  manifest.config_json = cfg.to_json().dump();

  const SynthOutputs synth = run_synth(cfg, manifest);
  std::filesystem::path media_fseq = synth.fseq;
  std::filesystem::path media_wav = synth.wav;
  if (!cfg.skip_attack) {
    const AttackOutputs attack = run_attack(cfg, synth.fseq, synth.wav, manifest);
    media_fseq = attack.fseq;
    media_wav = attack.wav;
  }
  run_detect(cfg, media_fseq, media_wav, synth.enf_csv, manifest);

  manifest.save(cfg.out_dir / "manifest.json");
  manifest.validate_artifacts();
  return manifest;
}

ScenarioOutcome simulate_scenario(const ExperimentConfig& cfg) {
  ScenarioOutcome out;
  out.reference = synth_reference(cfg);
  out.media_duration_s = cfg.script.duration_s;
  const ReferenceDb ref(out.reference);

  // live audio fully in memory (a few MB); frames stay streaming
  std::vector<float> live_audio;
  {
    AudioRenderer renderer(cfg.script, out.reference, cfg.camera, cfg.seeds.noise);
    live_audio.reserve(static_cast<std::size_t>(renderer.total_samples()));
    while (auto b = renderer.next()) live_audio.insert(live_audio.end(), b->samples.begin(), b->samples.end());
  }

  FrameRenderer frames(cfg.script, out.reference, cfg.camera, cfg.seeds.noise);
  VideoEnfEstimator video_est(cfg.camera, cfg.extract_video);
  EstimatedEnf video_series;
  video_series.series.rate_hz = 1.0 / cfg.extract_video.stft_hop_s;

  std::vector<float> observed_audio;
  observed_audio.reserve(live_audio.size());

  if (cfg.skip_attack) {
    std::optional<Frame> f;
    while ((f = frames.next())) {
      for (const auto& s : video_est.push(*f)) video_series.push_back(s);
    }
    observed_audio = live_audio;
  } else {
    std::vector<double> manual;
    for (const auto& m : cfg.script.manual_triggers) manual.push_back(m.time_s);
    AttackPipeline pipeline(cfg.attack, cfg.camera, cfg.gate_threads);
    AttackPipeline::Sinks sinks;
    sinks.frame = [&](const Frame& f) {
      for (const auto& s : video_est.push(f)) video_series.push_back(s);
    };
    sinks.audio = [&](std::span<const float> a) {
      observed_audio.insert(observed_audio.end(), a.begin(), a.end());
    };
    const auto t0 = std::chrono::steady_clock::now();
    out.events = pipeline.run(frames, live_audio, manual, sinks);
    out.attack_wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  std::vector<double> audio_samples(observed_audio.begin(), observed_audio.end());
  out.audio = detect_on_series(
      estimate_enf_audio(audio_samples, cfg.camera.audio_sample_rate_hz, cfg.extract_audio), ref,
      cfg.detector);
  out.video = detect_on_series(std::move(video_series), ref, cfg.detector);
  out.merged = merge_verdicts(out.audio, out.video);
  out.replay_intervals = replay_intervals(out.events, cfg.script.duration_s);
  return out;
}

LabeledWindows label_windows(const std::vector<DetectionWindow>& windows, const LabelTrack& labels) {
  LabeledWindows out;
  out.windows = windows;
  for (const auto& w : windows) {
    double replayed = 0.0;
    const int steps = 100;
    for (int i = 0; i < steps; ++i) {
      const double t = w.start_s + (w.end_s - w.start_s) * (i + 0.5) / steps;
      if (labels.time_replayed(t)) replayed += 1.0;
    }
    out.truth_tampered.push_back(replayed / steps > 0.5 ? 1 : 0);
  }
  return out;
}

std::vector<ExperimentConfig> default_corpus(int n_clean, int n_attacked, std::uint64_t base_seed) {
  std::vector<ExperimentConfig> corpus;
  for (int i = 0; i < n_clean; ++i) {
    ExperimentConfig cfg;
    cfg.scenario = "clean_" + std::to_string(i);
    cfg.script.duration_s = 150.0;
    cfg.script.light_toggles.push_back({50.0 + i, i % 2 == 0 ? 150.0 : 230.0});
    cfg.script.noise_bursts.push_back({90.0 + i, 91.5 + i, 0.4});
    cfg.extract_video.harmonic = 2;
    cfg.skip_attack = true;
    cfg.seeds.enf = base_seed + static_cast<std::uint64_t>(i);
    cfg.seeds.noise = base_seed + 1000 + static_cast<std::uint64_t>(i);
    corpus.push_back(std::move(cfg));
  }
  for (int i = 0; i < n_attacked; ++i) {
    ExperimentConfig cfg;
    cfg.scenario = "attacked_" + std::to_string(i);
    cfg.script.duration_s = 150.0;
    const double trigger_at = 69.0 + 2.0 * (i % 5);
    // continuous motion keeps the refresh policy from re-recording, so the
    // clip used at the splice is the one captured in the opening seconds
    cfg.script.motions.push_back({9.0, trigger_at + 0.5, 48, 240.0});
    cfg.script.triggers.push_back({trigger_at, trigger_at + 40.0, 24, 24});
    cfg.extract_video.harmonic = 2;
    cfg.seeds.enf = base_seed + 500 + static_cast<std::uint64_t>(i);
    cfg.seeds.noise = base_seed + 1500 + static_cast<std::uint64_t>(i);
    corpus.push_back(std::move(cfg));
  }
  return corpus;
}

}  // namespace enfsim
