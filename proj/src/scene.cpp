#include "enfsim/scene.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace enfsim {

namespace {
constexpr int kSchemaVersion = 1;

void check_interval(double start, double end, double duration, const char* what) {
  if (!(start < end)) throw std::invalid_argument(std::string(what) + ": start must be < end");
  if (start < 0.0 || end > duration) {
    throw std::invalid_argument(std::string(what) + ": interval outside [0, duration]");
  }
}
}  // namespace

void SceneScript::validate() const {
  if (!(duration_s > 0.0)) throw std::invalid_argument("SceneScript: duration must be > 0");
  if (initial_light_level < 0.0 || initial_light_level > 255.0) {
    throw std::invalid_argument("SceneScript: initial_light_level outside [0, 255]");
  }
  for (const auto& m : motions) {
    check_interval(m.start_s, m.end_s, duration_s, "MotionInterval");
    if (m.object_size_px <= 0) throw std::invalid_argument("MotionInterval: object size must be positive");
  }
  for (const auto& l : light_toggles) {
    if (l.time_s < 0.0 || l.time_s > duration_s) throw std::invalid_argument("LightToggle: time outside [0, duration]");
    if (l.level < 0.0 || l.level > 255.0) throw std::invalid_argument("LightToggle: level outside [0, 255]");
  }
  for (const auto& n : noise_bursts) {
    check_interval(n.start_s, n.end_s, duration_s, "NoiseBurst");
    if (n.amplitude < 0.0 || n.amplitude > 1.0) throw std::invalid_argument("NoiseBurst: amplitude outside [0, 1]");
  }
  for (const auto& t : triggers) check_interval(t.start_s, t.end_s, duration_s, "TriggerAppearance");
  for (const auto& m : manual_triggers) {
    if (m.time_s < 0.0 || m.time_s > duration_s) throw std::invalid_argument("ManualTrigger: time outside [0, duration]");
  }
}

double SceneScript::light_level_at(double t) const {
  double level = initial_light_level;
  double best = -1.0;
  for (const auto& l : light_toggles) {
    if (l.time_s <= t && l.time_s > best) {
      best = l.time_s;
      level = l.level;
    }
  }
  return level;
}

bool SceneScript::any_motion_at(double t) const {
  return std::any_of(motions.begin(), motions.end(),
                     [t](const MotionInterval& m) { return t >= m.start_s && t < m.end_s; });
}

bool SceneScript::trigger_visible_at(double t) const {
  return std::any_of(triggers.begin(), triggers.end(),
                     [t](const TriggerAppearance& a) { return t >= a.start_s && t < a.end_s; });
}

bool SceneScript::manual_fired_between(double t0, double t1) const {
  return std::any_of(manual_triggers.begin(), manual_triggers.end(),
                     [t0, t1](const ManualTrigger& m) { return m.time_s >= t0 && m.time_s < t1; });
}

nlohmann::json SceneScript::to_json() const {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& m : motions) {
    events.push_back({{"type", "motion"},
                      {"start_s", m.start_s},
                      {"end_s", m.end_s},
                      {"object_size_px", m.object_size_px},
                      {"velocity_px_per_s", m.velocity_px_per_s}});
  }
  for (const auto& l : light_toggles) {
    events.push_back({{"type", "light"}, {"time_s", l.time_s}, {"level", l.level}});
  }
  for (const auto& n : noise_bursts) {
    events.push_back({{"type", "noise"}, {"start_s", n.start_s}, {"end_s", n.end_s}, {"amplitude", n.amplitude}});
  }
  for (const auto& t : triggers) {
    events.push_back({{"type", "trigger"}, {"start_s", t.start_s}, {"end_s", t.end_s}, {"x_px", t.x_px}, {"y_px", t.y_px}});
  }
  for (const auto& m : manual_triggers) {
    events.push_back({{"type", "manual"}, {"time_s", m.time_s}});
  }
  return {{"schema_version", kSchemaVersion},
          {"duration_s", duration_s},
          {"initial_light_level", initial_light_level},
          {"events", events}};
}

SceneScript SceneScript::from_json(const nlohmann::json& j) {
  if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kSchemaVersion) {
    throw std::invalid_argument("SceneScript: missing or unsupported schema_version");
  }
  SceneScript s;
  s.duration_s = j.at("duration_s").get<double>();
  s.initial_light_level = j.value("initial_light_level", 200.0);
  for (const auto& e : j.value("events", nlohmann::json::array())) {
    const auto type = e.at("type").get<std::string>();
    if (type == "motion") {
      s.motions.push_back({e.at("start_s").get<double>(), e.at("end_s").get<double>(),
                           e.value("object_size_px", 48), e.value("velocity_px_per_s", 240.0)});
    } else if (type == "light") {
      s.light_toggles.push_back({e.at("time_s").get<double>(), e.at("level").get<double>()});
    } else if (type == "noise") {
      s.noise_bursts.push_back({e.at("start_s").get<double>(), e.at("end_s").get<double>(),
                                e.value("amplitude", 0.5)});
    } else if (type == "trigger") {
      s.triggers.push_back({e.at("start_s").get<double>(), e.at("end_s").get<double>(),
                            e.value("x_px", 16), e.value("y_px", 16)});
    } else if (type == "manual") {
      s.manual_triggers.push_back({e.at("time_s").get<double>()});
    } else {
      throw std::invalid_argument("SceneScript: unknown event type '" + type + "'");
    }
  }
  s.validate();
  return s;
}

SceneScript SceneScript::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("SceneScript: cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

void SceneScript::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("SceneScript: cannot write " + path.string());
  out << to_json().dump(2) << "\n";
}

}  // namespace enfsim
