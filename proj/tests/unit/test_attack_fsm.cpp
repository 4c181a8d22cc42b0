#include <doctest.h>

#include <cmath>

#include "enfsim/attack.hpp"
#include "enfsim/blur.hpp"
#include "enfsim/motion.hpp"
#include "enfsim/render.hpp"
#include "fsm_model.hpp"

using namespace enfsim;

namespace {

struct Driver {
  AttackEngine engine;
  Frame live;
  std::vector<float> audio;
  long long frame = 0;
  static constexpr double kFps = 30.0;

  explicit Driver(const AttackParams& p) : engine(p, kFps) {
    live.width = 4;
    live.height = 4;
    live.row_readout_s = 1e-5;
    live.pixels.assign(16, 0.0f);
    audio.assign(8, 0.0f);
  }

  AttackEngine::StepResult step(bool motion, bool noise, bool trigger, bool manual = false,
                                float tag = -1.0f) {
    GateInputs g;
    g.motion = motion;
    g.noise = noise;
    g.trigger_visible = trigger;
    g.manual = manual;
    live.timestamp_s = static_cast<double>(frame) / kFps;
    live.pixels.assign(16, tag >= 0.0f ? tag : static_cast<float>(frame % 251));
    ++frame;
    return engine.step(live, audio, g);
  }

  void run_quiet(int n) {
    for (int i = 0; i < n; ++i) step(false, false, false);
  }
};

AttackParams quick_params() {
  AttackParams p;
  p.min_clip_s = 0.2;       // 6 frames
  p.refresh_interval_s = 1.0;
  p.cooldown_s = 0.2;       // 6 frames
  return p;
}

bool has_event(const std::vector<AttackLogEvent>& events, AttackEventType t) {
  for (const auto& e : events) {
    if (e.type == t) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("no trigger: output passes the live stream through untouched") {
  Driver d(quick_params());
  for (int i = 0; i < 90; ++i) {
    const float tag = static_cast<float>(i % 251);
    const auto out = d.step(i % 17 == 3, i % 23 == 7, false, false, tag);
    CHECK_FALSE(out.replayed);
    REQUIRE(out.frame.pixels == d.live.pixels);
    REQUIRE(out.audio == d.audio);
  }
  CHECK(d.engine.state().mode != AttackMode::replaying);
}

TEST_CASE("trigger with static scene and a complete clip replays clip frame 0") {
  Driver d(quick_params());
  // record material tagged 100
  for (int i = 0; i < 8; ++i) d.step(false, false, false, false, 100.0f);
  REQUIRE(d.engine.clip() != nullptr);

  const auto out = d.step(false, false, true, false, 55.0f);
  CHECK(d.engine.state().mode == AttackMode::replaying);
  CHECK(out.replayed);
  REQUIRE(out.frame.pixels == d.engine.clip()->frames[0].pixels);
  CHECK(out.frame.timestamp_s == d.live.timestamp_s);  // re-stamped to live cadence
  CHECK(has_event(out.events, AttackEventType::trigger));
  CHECK(has_event(out.events, AttackEventType::replay_start));
}

TEST_CASE("trigger during motion: replay waits for the scene to go static") {
  Driver d(quick_params());
  for (int i = 0; i < 8; ++i) d.step(false, false, false);
  REQUIRE(d.engine.clip() != nullptr);

  auto out = d.step(true, false, true);  // intruder in view, still moving
  CHECK(d.engine.state().mode == AttackMode::armed);
  CHECK_FALSE(out.replayed);
  for (int i = 0; i < 5; ++i) {
    out = d.step(true, false, true);
    CHECK(d.engine.state().mode == AttackMode::armed);
    CHECK_FALSE(out.replayed);
  }
  out = d.step(false, false, true);  // motion ends
  CHECK(d.engine.state().mode == AttackMode::replaying);
  CHECK(out.replayed);
}

TEST_CASE("arming without any complete clip warns and stays armed") {
  Driver d(quick_params());
  const auto out = d.step(false, false, false, true);  // manual on the very first frame
  CHECK(d.engine.state().mode == AttackMode::armed);
  CHECK(has_event(out.events, AttackEventType::warning));
  CHECK_FALSE(out.replayed);
  // material accrues while armed; replay starts as soon as a clip completes
  bool replayed = false;
  for (int i = 0; i < 10 && !replayed; ++i) replayed = d.step(false, false, false).replayed;
  CHECK(replayed);
}

TEST_CASE("replay ends after the trigger has been absent for the cooldown") {
  Driver d(quick_params());
  for (int i = 0; i < 8; ++i) d.step(false, false, false);
  d.step(false, false, true);
  REQUIRE(d.engine.state().mode == AttackMode::replaying);

  for (int i = 0; i < 10; ++i) {
    const auto out = d.step(false, false, true);
    CHECK(out.replayed);
  }
  // trigger leaves; cooldown is 6 frames
  std::vector<AttackLogEvent> all;
  int replay_frames = 0;
  for (int i = 0; i < 12; ++i) {
    const auto out = d.step(false, false, false);
    if (out.replayed) ++replay_frames;
    all.insert(all.end(), out.events.begin(), out.events.end());
  }
  CHECK(replay_frames == 5);  // absence counter hits 6 on the sixth frame
  CHECK(has_event(all, AttackEventType::replay_end));
  CHECK(d.engine.state().mode == AttackMode::monitoring);
}

TEST_CASE("manually triggered replay lasts exactly the cooldown") {
  Driver d(quick_params());
  for (int i = 0; i < 8; ++i) d.step(false, false, false);
  d.step(false, false, false, true);
  REQUIRE(d.engine.state().mode == AttackMode::replaying);
  int replay_frames = 1;
  for (int i = 0; i < 20; ++i) {
    if (d.step(false, false, false).replayed) ++replay_frames;
  }
  CHECK(replay_frames == 5);
  CHECK(d.engine.state().mode == AttackMode::monitoring);
}

TEST_CASE("refresh policy: stale clips are due, fresh ones are not") {
  AttackParams p;
  p.min_clip_s = 0.2;
  p.refresh_interval_s = 5.0;
  Driver d(p);
  for (int i = 0; i < 8; ++i) d.step(false, false, false);
  REQUIRE(d.engine.clip() != nullptr);
  const double recorded_at = d.engine.clip()->recorded_at_s;
  CHECK_FALSE(d.engine.refresh_due(recorded_at + 2.0));
  CHECK(d.engine.refresh_due(recorded_at + 6.0));
}

TEST_CASE("a continuously static hour keeps the clip within twice the interval") {
  AttackParams p = quick_params();
  p.refresh_interval_s = 1.0;
  Driver d(p);
  double worst_age = 0.0;
  for (int i = 0; i < 60 * 30; ++i) {
    d.step(false, false, false);
    if (d.engine.clip() != nullptr) {
      const double now = static_cast<double>(d.frame) / Driver::kFps;
      worst_age = std::max(worst_age, now - d.engine.clip()->recorded_at_s);
    }
  }
  CHECK(worst_age <= 2.0 * p.refresh_interval_s);
}

TEST_CASE("noise interrupts and discards a static recording") {
  Driver d(quick_params());
  for (int i = 0; i < 3; ++i) d.step(false, false, false);  // partial (needs 6)
  CHECK(d.engine.state().mode == AttackMode::recording_static);
  const auto out = d.step(false, true, false);
  CHECK(d.engine.state().mode == AttackMode::monitoring);
  CHECK(has_event(out.events, AttackEventType::noise_start));
  CHECK(d.engine.clip() == nullptr);
}

TEST_CASE("exhaustive model check over short gate scripts finds no violations") {
  // full depth runs in the acceptance suite; this keeps the invariant wired
  // into every unit-test run
  auto quick = fsmmodel::enumerate_sequences(3, 7, 10);
  CHECK(quick.sequences == 3279);
  CHECK(quick.violations == 0);
  CHECK(quick.replays_entered > 0);

  auto five = fsmmodel::enumerate_sequences(5, 5, 10);
  CHECK(five.sequences == 3905);
  INFO(five.first_violation);
  CHECK(five.violations == 0);
  CHECK(five.replays_entered > 0);
}

TEST_CASE("light toggles register as motion for at least one frame pair") {
  SceneScript script;
  script.duration_s = 4.0;
  script.initial_light_level = 200.0;
  script.light_toggles.push_back({1.0, 120.0});
  script.light_toggles.push_back({2.0, 235.0});
  script.light_toggles.push_back({3.0, 60.0});
  CameraParams cam;
  EnfSeries enf;
  enf.rate_hz = 1.0;
  enf.values_hz.assign(7, 60.0);

  FrameRenderer r(script, enf, cam, 77);
  BlurParams blur;
  MotionParams motion;
  std::optional<Frame> prev;
  std::vector<double> motion_times;
  while (auto f = r.next()) {
    Frame blurred = gaussian_blur(*f, blur);
    if (prev) {
      if (detect_motion(*prev, blurred, motion).motion) motion_times.push_back(f->timestamp_s);
    }
    prev = std::move(blurred);
  }
  for (double toggle : {1.0, 2.0, 3.0}) {
    bool seen = false;
    for (double t : motion_times) {
      if (std::fabs(t - toggle) < 0.2) seen = true;
    }
    CHECK(seen);
  }
  // and the static stretches in between stay quiet
  for (double t : motion_times) {
    const bool near_toggle = std::fabs(t - 1.0) < 0.2 || std::fabs(t - 2.0) < 0.2 ||
                             std::fabs(t - 3.0) < 0.2;
    CHECK(near_toggle);
  }
}
