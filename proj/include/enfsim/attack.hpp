#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "enfsim/blur.hpp"
#include "enfsim/frame.hpp"
#include "enfsim/motion.hpp"
#include "enfsim/noise_gate.hpp"
#include "enfsim/trigger.hpp"

namespace enfsim {

struct AttackParams {
  BlurParams blur;
  MotionParams motion;
  NoiseGateParams noise_gate;
  TriggerParams trigger;
  double min_clip_s = 2.0;          // static material needed before a clip is usable
  double refresh_interval_s = 5.0;  // re-record cadence while the scene stays static
  double cooldown_s = 3.0;          // replay ends this long after the trigger vanishes

  void validate() const;
};

enum class AttackMode { monitoring, recording_static, armed, replaying };

enum class AttackEventType {
  motion_start,
  motion_end,
  noise_start,
  noise_end,
  clip_complete,
  trigger,
  replay_start,
  replay_end,
  warning,
};

const char* to_string(AttackEventType t);
const char* to_string(AttackMode m);

struct AttackLogEvent {
  double time_s = 0.0;
  AttackEventType type = AttackEventType::warning;
  std::string detail;
};

// Contiguous material captured while the gates were silent. Frames and the
// matching audio samples always travel together.
struct StaticClip {
  std::vector<Frame> frames;
  std::vector<float> audio;
  double recorded_at_s = 0.0;
  bool complete = false;
};

struct AttackState {
  AttackMode mode = AttackMode::monitoring;
  std::optional<double> trigger_time_s;
  std::size_t replay_cursor = 0;
};

// Per-frame gate verdicts, computed outside the FSM. The pipeline guarantees
// `noise` already covers this frame's audio samples (frames are held back
// until their audio block has been gated), so recorded material is clean by
// construction.
struct GateInputs {
  bool motion = false;
  bool noise = false;
  bool trigger_visible = false;
  bool manual = false;
  std::int64_t changed_count = 0;
  std::optional<TemplateMatch> match;
};

// The flow-diagram state machine. step() is the single mutator and must be
// externally serialized; everything around it (gates) is pure.
class AttackEngine {
 public:
  AttackEngine(AttackParams params, double fps);

  struct StepResult {
    Frame frame;
    std::vector<float> audio;
    std::vector<AttackLogEvent> events;
    bool replayed = false;
  };

  StepResult step(const Frame& live, std::span<const float> live_audio, const GateInputs& g);

  // close out the log at stream end (replay_end if a replay is still running)
  std::vector<AttackLogEvent> finish(double end_time_s);

  const AttackState& state() const { return state_; }
  const StaticClip* clip() const { return clip_.complete ? &clip_ : nullptr; }

  // refresh_policy: true when the retained clip is due for re-recording
  bool refresh_due(double now_s) const;

 private:
  void start_recording();
  void discard_recording();

  AttackParams params_;
  double fps_;
  std::size_t min_clip_frames_;
  std::size_t cooldown_frames_;

  AttackState state_;
  bool prev_motion_ = false;
  bool prev_noise_ = false;
  bool warned_no_clip_ = false;

  bool recording_ = false;
  std::deque<std::pair<Frame, std::vector<float>>> rec_;

  StaticClip clip_;
  std::size_t audio_pos_ = 0;
  std::size_t trigger_absent_frames_ = 0;
};

// Wires the gates to the FSM over complete streams. Audio rides along as a
// flat buffer (one video frame period at a time); frames are withheld from
// the FSM until the audio gate has ruled on their samples.
class AttackPipeline {
 public:
  struct Sinks {
    std::function<void(const Frame&)> frame;                 // optional
    std::function<void(std::span<const float>)> audio;       // optional
    std::function<void(const AttackLogEvent&)> event;        // optional
  };

  // gate_threads: 1 = everything inline; 2 = video gating (blur, diff, NCC)
  // runs on its own thread and feeds the FSM through a bounded queue.
  AttackPipeline(AttackParams params, CameraParams cam, int gate_threads = 1);

  std::vector<AttackLogEvent> run(FrameSource& frames, std::span<const float> audio,
                                  std::span<const double> manual_trigger_times, Sinks sinks);

 private:
  AttackParams params_;
  CameraParams cam_;
  int gate_threads_;
};

void write_event_log_csv(const std::filesystem::path& path,
                         std::span<const AttackLogEvent> events);
std::vector<AttackLogEvent> read_event_log_csv(const std::filesystem::path& path);

// replay intervals [start, end) recovered from the event log
std::vector<std::pair<double, double>> replay_intervals(std::span<const AttackLogEvent> events,
                                                        double stream_end_s);

}  // namespace enfsim
