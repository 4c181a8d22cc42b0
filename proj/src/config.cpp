#include "enfsim/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace enfsim {

namespace {
constexpr int kSchemaVersion = 1;

nlohmann::json grid_to_json(const GridParams& g) {
  return {{"f_nominal_hz", g.f_nominal_hz},
          {"deviation_bound_hz", g.deviation_bound_hz},
          {"reversion_rate", g.reversion_rate},
          {"volatility", g.volatility},
          {"sample_rate_enf_hz", g.sample_rate_enf_hz}};
}

GridParams grid_from_json(const nlohmann::json& j) {
  GridParams g;
  g.f_nominal_hz = j.value("f_nominal_hz", g.f_nominal_hz);
  g.deviation_bound_hz = j.value("deviation_bound_hz", g.deviation_bound_hz);
  g.reversion_rate = j.value("reversion_rate", g.reversion_rate);
  g.volatility = j.value("volatility", g.volatility);
  g.sample_rate_enf_hz = j.value("sample_rate_enf_hz", g.sample_rate_enf_hz);
  g.validate();
  return g;
}

nlohmann::json camera_to_json(const CameraParams& c) {
  nlohmann::json harmonics = nlohmann::json::array();
  for (const auto& h : c.hum_harmonics) harmonics.push_back({{"harmonic", h.harmonic}, {"amplitude", h.amplitude}});
  return {{"width", c.width},
          {"height", c.height},
          {"fps_num", c.fps_num},
          {"fps_den", c.fps_den},
          {"row_readout_ns", c.row_readout_s * 1e9},
          {"flicker_depth", c.flicker_depth},
          {"hum_amplitude", c.hum_amplitude},
          {"hum_harmonics", harmonics},
          {"video_noise_sigma", c.video_noise_sigma},
          {"audio_noise_sigma", c.audio_noise_sigma},
          {"audio_sample_rate_hz", c.audio_sample_rate_hz}};
}

CameraParams camera_from_json(const nlohmann::json& j) {
  CameraParams c;
  c.width = j.value("width", c.width);
  c.height = j.value("height", c.height);
  c.fps_num = j.value("fps_num", c.fps_num);
  c.fps_den = j.value("fps_den", c.fps_den);
  if (j.contains("row_readout_ns")) c.row_readout_s = j.at("row_readout_ns").get<double>() * 1e-9;
  c.flicker_depth = j.value("flicker_depth", c.flicker_depth);
  c.hum_amplitude = j.value("hum_amplitude", c.hum_amplitude);
  if (j.contains("hum_harmonics")) {
    c.hum_harmonics.clear();
    for (const auto& h : j.at("hum_harmonics")) {
      c.hum_harmonics.push_back({h.at("harmonic").get<int>(), h.at("amplitude").get<double>()});
    }
  }
  c.video_noise_sigma = j.value("video_noise_sigma", c.video_noise_sigma);
  c.audio_noise_sigma = j.value("audio_noise_sigma", c.audio_noise_sigma);
  c.audio_sample_rate_hz = j.value("audio_sample_rate_hz", c.audio_sample_rate_hz);
  c.validate();
  return c;
}

nlohmann::json attack_to_json(const AttackParams& a) {
  nlohmann::json harmonics = nlohmann::json::array();
  for (int h : a.noise_gate.hum_harmonics) harmonics.push_back(h);
  return {{"blur", {{"kernel_size", a.blur.kernel_size}, {"sigma_px", a.blur.sigma()}}},
          {"motion",
           {{"pixel_delta_threshold", a.motion.pixel_delta_threshold},
            {"changed_fraction_threshold", a.motion.changed_fraction_threshold}}},
          {"noise_gate",
           {{"threshold", a.noise_gate.threshold},
            {"nominal_hz", a.noise_gate.nominal_hz},
            {"hum_harmonics", harmonics},
            {"guard_hz", a.noise_gate.guard_hz},
            {"block_len", a.noise_gate.block_len}}},
          {"trigger",
           {{"ncc_threshold", a.trigger.ncc_threshold},
            {"template_size", a.trigger.templ.width}}},
          {"min_clip_s", a.min_clip_s},
          {"refresh_interval_s", a.refresh_interval_s},
          {"cooldown_s", a.cooldown_s}};
}

AttackParams attack_from_json(const nlohmann::json& j) {
  AttackParams a;
  if (j.contains("blur")) {
    a.blur.kernel_size = j.at("blur").value("kernel_size", a.blur.kernel_size);
    if (j.at("blur").contains("sigma_px")) a.blur.sigma_px = j.at("blur").at("sigma_px").get<double>();
  }
  if (j.contains("motion")) {
    a.motion.pixel_delta_threshold = j.at("motion").value("pixel_delta_threshold", a.motion.pixel_delta_threshold);
    a.motion.changed_fraction_threshold =
        j.at("motion").value("changed_fraction_threshold", a.motion.changed_fraction_threshold);
  }
  if (j.contains("noise_gate")) {
    const auto& n = j.at("noise_gate");
    a.noise_gate.threshold = n.value("threshold", a.noise_gate.threshold);
    a.noise_gate.nominal_hz = n.value("nominal_hz", a.noise_gate.nominal_hz);
    a.noise_gate.guard_hz = n.value("guard_hz", a.noise_gate.guard_hz);
    a.noise_gate.block_len = n.value("block_len", a.noise_gate.block_len);
    if (n.contains("hum_harmonics")) {
      a.noise_gate.hum_harmonics.clear();
      for (const auto& h : n.at("hum_harmonics")) a.noise_gate.hum_harmonics.push_back(h.get<int>());
    }
  }
  if (j.contains("trigger")) {
    a.trigger.ncc_threshold = j.at("trigger").value("ncc_threshold", a.trigger.ncc_threshold);
    const int size = j.at("trigger").value("template_size", a.trigger.templ.width);
    if (size != a.trigger.templ.width) a.trigger.templ = Patch::fiducial(size);
  }
  a.min_clip_s = j.value("min_clip_s", a.min_clip_s);
  a.refresh_interval_s = j.value("refresh_interval_s", a.refresh_interval_s);
  a.cooldown_s = j.value("cooldown_s", a.cooldown_s);
  a.validate();
  return a;
}

nlohmann::json extraction_to_json(const ExtractionParams& e) {
  return {{"nominal_hz", e.nominal_hz},
          {"harmonic", e.harmonic},
          {"search_halfwidth_hz", e.search_halfwidth_hz},
          {"stft_frame_s", e.stft_frame_s},
          {"stft_hop_s", e.stft_hop_s},
          {"window", e.window == Window::hann ? "hann" : "rect"}};
}

ExtractionParams extraction_from_json(const nlohmann::json& j, int default_harmonic) {
  ExtractionParams e;
  e.harmonic = default_harmonic;
  e.nominal_hz = j.value("nominal_hz", e.nominal_hz);
  e.harmonic = j.value("harmonic", e.harmonic);
  e.search_halfwidth_hz = j.value("search_halfwidth_hz", e.search_halfwidth_hz);
  e.stft_frame_s = j.value("stft_frame_s", e.stft_frame_s);
  e.stft_hop_s = j.value("stft_hop_s", e.stft_hop_s);
  if (j.contains("window")) {
    const auto w = j.at("window").get<std::string>();
    if (w == "hann") e.window = Window::hann;
    else if (w == "rect") e.window = Window::rect;
    else throw std::invalid_argument("ExtractionParams: unknown window '" + w + "'");
  }
  return e;
}

nlohmann::json detector_to_json(const DetectorParams& d) {
  return {{"window_len", d.window_len},
          {"hop", d.hop},
          {"rho_threshold", d.rho_threshold},
          {"min_confidence", d.min_confidence},
          {"nominal_hz", d.nominal_hz}};
}

DetectorParams detector_from_json(const nlohmann::json& j) {
  DetectorParams d;
  d.window_len = j.value("window_len", d.window_len);
  d.hop = j.value("hop", d.hop);
  d.rho_threshold = j.value("rho_threshold", d.rho_threshold);
  d.min_confidence = j.value("min_confidence", d.min_confidence);
  d.nominal_hz = j.value("nominal_hz", d.nominal_hz);
  d.validate();
  return d;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig cfg;
  cfg.script.duration_s = 60.0;
  cfg.script.motions.push_back({10.0, 29.0, 48, 240.0});
  cfg.script.triggers.push_back({30.0, 40.0, 24, 24});
  cfg.extract_video.harmonic = 2;
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"schema_version", kSchemaVersion},
          {"scenario", scenario},
          {"scene_script", script.to_json()},
          {"grid", grid_to_json(grid)},
          {"camera", camera_to_json(camera)},
          {"attack", attack_to_json(attack)},
          {"extraction_audio", extraction_to_json(extract_audio)},
          {"extraction_video", extraction_to_json(extract_video)},
          {"detector", detector_to_json(detector)},
          {"seeds", {{"enf", seeds.enf}, {"noise", seeds.noise}}},
          {"out_dir", out_dir.string()},
          {"skip_attack", skip_attack},
          {"reference_noise_sigma", reference_noise_sigma},
          {"gate_threads", gate_threads}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kSchemaVersion) {
    throw std::invalid_argument("ExperimentConfig: missing or unsupported schema_version");
  }
  ExperimentConfig cfg;
  cfg.scenario = j.value("scenario", cfg.scenario);
  if (j.contains("scene_script")) {
    const auto& s = j.at("scene_script");
    // inline object or path to a script file
    if (s.is_string()) {
      cfg.script = SceneScript::load(s.get<std::string>());
    } else {
      cfg.script = SceneScript::from_json(s);
    }
  }
  if (j.contains("grid")) cfg.grid = grid_from_json(j.at("grid"));
  if (j.contains("camera")) cfg.camera = camera_from_json(j.at("camera"));
  if (j.contains("attack")) cfg.attack = attack_from_json(j.at("attack"));
  cfg.extract_audio = j.contains("extraction_audio")
                          ? extraction_from_json(j.at("extraction_audio"), 1)
                          : cfg.extract_audio;
  if (j.contains("extraction_video")) {
    cfg.extract_video = extraction_from_json(j.at("extraction_video"), 2);
  } else {
    cfg.extract_video.harmonic = 2;
  }
  if (j.contains("detector")) cfg.detector = detector_from_json(j.at("detector"));
  if (j.contains("seeds")) {
    cfg.seeds.enf = j.at("seeds").value("enf", cfg.seeds.enf);
    cfg.seeds.noise = j.at("seeds").value("noise", cfg.seeds.noise);
  }
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  cfg.skip_attack = j.value("skip_attack", false);
  cfg.reference_noise_sigma = j.value("reference_noise_sigma", 0.0);
  cfg.gate_threads = j.value("gate_threads", 1);
  // keep the nominal aligned with the grid unless explicitly overridden
  if (!j.contains("extraction_audio") || !j.at("extraction_audio").contains("nominal_hz")) {
    cfg.extract_audio.nominal_hz = cfg.grid.f_nominal_hz;
  }
  if (!j.contains("extraction_video") || !j.at("extraction_video").contains("nominal_hz")) {
    cfg.extract_video.nominal_hz = cfg.grid.f_nominal_hz;
  }
  if (!j.contains("detector") || !j.at("detector").contains("nominal_hz")) {
    cfg.detector.nominal_hz = cfg.grid.f_nominal_hz;
  }
  if (!j.contains("attack") || !j.at("attack").contains("noise_gate") ||
      !j.at("attack").at("noise_gate").contains("nominal_hz")) {
    cfg.attack.noise_gate.nominal_hz = cfg.grid.f_nominal_hz;
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ExperimentConfig: cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

void ExperimentConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("ExperimentConfig: cannot write " + path.string());
  out << to_json().dump(2) << "\n";
}

}  // namespace enfsim
