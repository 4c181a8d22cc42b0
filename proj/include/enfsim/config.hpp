#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "enfsim/attack.hpp"
#include "enfsim/detector.hpp"
#include "enfsim/enf.hpp"
#include "enfsim/extract.hpp"
#include "enfsim/frame.hpp"
#include "enfsim/scene.hpp"

namespace enfsim {

struct Seeds {
  std::uint64_t enf = 7;
  std::uint64_t noise = 1001;
};

// Everything one reproducible end-to-end run needs. Serialized as JSON with a
// schema_version; seeds are snapshotted into the run manifest.
struct ExperimentConfig {
  std::string scenario = "default";
  SceneScript script;
  GridParams grid;
  CameraParams camera;
  AttackParams attack;
  ExtractionParams extract_audio;   // harmonic 1
  ExtractionParams extract_video;   // harmonic 2
  DetectorParams detector;
  Seeds seeds;
  std::filesystem::path out_dir = "out";
  bool skip_attack = false;
  double reference_noise_sigma = 0.0;  // optional measurement noise on the reference
  int gate_threads = 1;

  static ExperimentConfig defaults();

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

}  // namespace enfsim
