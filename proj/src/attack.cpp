#include "enfsim/attack.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace enfsim {

void AttackParams::validate() const {
  blur.validate();
  motion.validate();
  noise_gate.validate();
  trigger.validate();
  if (!(min_clip_s > 0.0)) throw std::invalid_argument("AttackParams: min_clip_s must be > 0");
  if (!(refresh_interval_s > 0.0)) throw std::invalid_argument("AttackParams: refresh_interval_s must be > 0");
  if (!(cooldown_s > 0.0)) throw std::invalid_argument("AttackParams: cooldown_s must be > 0");
}

const char* to_string(AttackEventType t) {
  switch (t) {
    case AttackEventType::motion_start: return "motion_start";
    case AttackEventType::motion_end: return "motion_end";
    case AttackEventType::noise_start: return "noise_start";
    case AttackEventType::noise_end: return "noise_end";
    case AttackEventType::clip_complete: return "clip_complete";
    case AttackEventType::trigger: return "trigger";
    case AttackEventType::replay_start: return "replay_start";
    case AttackEventType::replay_end: return "replay_end";
    case AttackEventType::warning: return "warning";
  }
  return "?";
}

const char* to_string(AttackMode m) {
  switch (m) {
    case AttackMode::monitoring: return "monitoring";
    case AttackMode::recording_static: return "recording_static";
    case AttackMode::armed: return "armed";
    case AttackMode::replaying: return "replaying";
  }
  return "?";
}

AttackEngine::AttackEngine(AttackParams params, double fps)
    : params_(std::move(params)), fps_(fps) {
  params_.validate();
  if (!(fps > 0.0)) throw std::invalid_argument("AttackEngine: fps must be > 0");
  min_clip_frames_ = static_cast<std::size_t>(std::ceil(params_.min_clip_s * fps_));
  cooldown_frames_ = static_cast<std::size_t>(std::ceil(params_.cooldown_s * fps_));
}

bool AttackEngine::refresh_due(double now_s) const {
  return clip_.complete && now_s - clip_.recorded_at_s >= params_.refresh_interval_s;
}

void AttackEngine::start_recording() {
  rec_.clear();
  recording_ = true;
}

void AttackEngine::discard_recording() {
  rec_.clear();
  recording_ = false;
}

AttackEngine::StepResult AttackEngine::step(const Frame& live, std::span<const float> live_audio,
                                            const GateInputs& g) {
  StepResult out;
  const double t = live.timestamp_s;

  if (g.motion != prev_motion_) {
    out.events.push_back({t, g.motion ? AttackEventType::motion_start : AttackEventType::motion_end,
                          "changed_count=" + std::to_string(g.changed_count)});
    prev_motion_ = g.motion;
  }
  if (g.noise != prev_noise_) {
    out.events.push_back({t, g.noise ? AttackEventType::noise_start : AttackEventType::noise_end, ""});
    prev_noise_ = g.noise;
  }

  const bool scene_static = !g.motion && !g.noise;

  if (state_.mode == AttackMode::replaying) {
    if (g.trigger_visible) {
      trigger_absent_frames_ = 0;
    } else {
      ++trigger_absent_frames_;
    }
    if (trigger_absent_frames_ >= cooldown_frames_) {
      state_.mode = AttackMode::monitoring;
      state_.replay_cursor = 0;
      out.events.push_back({t, AttackEventType::replay_end, "cooldown"});
    }
  } else if (g.trigger_visible || g.manual) {
    if (state_.mode != AttackMode::armed) {
      state_.mode = AttackMode::armed;
      state_.trigger_time_s = t;
      std::string detail = g.manual ? "manual" : "fiducial";
      if (g.match) {
        detail += "@" + std::to_string(g.match->x) + "," + std::to_string(g.match->y);
      }
      out.events.push_back({t, AttackEventType::trigger, detail});
      if (!clip_.complete && !warned_no_clip_) {
        out.events.push_back({t, AttackEventType::warning, "armed_without_complete_clip"});
        warned_no_clip_ = true;
      }
    }
  }

  // static-clip maintenance (never while replaying: those live frames show
  // what the attack is hiding)
  if (state_.mode != AttackMode::replaying) {
    if (!scene_static) {
      if (recording_) discard_recording();
      if (state_.mode == AttackMode::recording_static) state_.mode = AttackMode::monitoring;
    } else {
      if (!recording_) {
        const bool want_new_clip = !clip_.complete || refresh_due(t);
        if (state_.mode == AttackMode::monitoring && want_new_clip) {
          start_recording();
          state_.mode = AttackMode::recording_static;
        } else if (state_.mode == AttackMode::armed && !clip_.complete) {
          start_recording();  // keep hunting for material, stay armed
        }
      }
      if (recording_) {
        rec_.emplace_back(live, std::vector<float>(live_audio.begin(), live_audio.end()));
        while (rec_.size() > min_clip_frames_) rec_.pop_front();
        if (rec_.size() >= min_clip_frames_) {
          StaticClip clip;
          clip.frames.reserve(rec_.size());
          for (auto& [f, a] : rec_) {
            clip.frames.push_back(std::move(f));
            clip.audio.insert(clip.audio.end(), a.begin(), a.end());
          }
          clip.recorded_at_s = t;
          clip.complete = true;
          clip_ = std::move(clip);
          discard_recording();
          if (state_.mode == AttackMode::recording_static) state_.mode = AttackMode::monitoring;
          out.events.push_back({t, AttackEventType::clip_complete,
                                "frames=" + std::to_string(clip_.frames.size())});
        }
      }
    }
  }

  // replay entry: trigger seen, scene static again, material available
  if (state_.mode == AttackMode::armed && scene_static && clip_.complete) {
    state_.mode = AttackMode::replaying;
    state_.replay_cursor = 0;
    audio_pos_ = 0;
    trigger_absent_frames_ = g.trigger_visible ? 0 : 1;
    out.events.push_back({t, AttackEventType::replay_start,
                          "clip_recorded_at=" + std::to_string(clip_.recorded_at_s)});
  }

  if (state_.mode == AttackMode::replaying) {
    const Frame& src = clip_.frames[state_.replay_cursor % clip_.frames.size()];
    out.frame = src;
    out.frame.timestamp_s = live.timestamp_s;  // masked stream keeps live cadence
    out.frame.row_readout_s = live.row_readout_s;
    ++state_.replay_cursor;
    out.audio.resize(live_audio.size());
    for (std::size_t i = 0; i < out.audio.size(); ++i) {
      out.audio[i] = clip_.audio[audio_pos_];
      audio_pos_ = (audio_pos_ + 1) % clip_.audio.size();
    }
    out.replayed = true;
  } else {
    out.frame = live;
    out.audio.assign(live_audio.begin(), live_audio.end());
  }
  return out;
}

std::vector<AttackLogEvent> AttackEngine::finish(double end_time_s) {
  std::vector<AttackLogEvent> events;
  if (state_.mode == AttackMode::replaying) {
    state_.mode = AttackMode::monitoring;
    events.push_back({end_time_s, AttackEventType::replay_end, "stream_end"});
  }
  return events;
}

namespace {

struct VideoGateMsg {
  std::int64_t index = 0;
  bool motion = false;
  std::int64_t changed = 0;
  std::optional<TemplateMatch> match;
};

// one time-stamped message per frame from the video gate to the FSM thread
struct GateItem {
  Frame frame;
  VideoGateMsg msg;
};

// bounded queue; empty optional marks end of stream
class GateQueue {
 public:
  explicit GateQueue(std::size_t cap) : cap_(cap) {}

  void push(std::optional<GateItem> item) {
    std::unique_lock lock(m_);
    cv_pop_.wait(lock, [&] { return q_.size() < cap_; });
    q_.push_back(std::move(item));
    cv_push_.notify_one();
  }

  std::optional<GateItem> pop() {
    std::unique_lock lock(m_);
    cv_push_.wait(lock, [&] { return !q_.empty(); });
    std::optional<GateItem> item = std::move(q_.front());
    q_.pop_front();
    cv_pop_.notify_one();
    return item;
  }

 private:
  std::size_t cap_;
  std::deque<std::optional<GateItem>> q_;
  std::mutex m_;
  std::condition_variable cv_push_;
  std::condition_variable cv_pop_;
};

VideoGateMsg video_gate(std::int64_t index, const Frame& frame, const Frame* prev_blurred,
                        Frame& blurred_out, const AttackParams& params) {
  VideoGateMsg msg;
  msg.index = index;
  blurred_out = gaussian_blur(frame, params.blur);
  if (prev_blurred) {
    const auto res = detect_motion(*prev_blurred, blurred_out, params.motion);
    msg.motion = res.motion;
    msg.changed = res.changed_count;
  }
  msg.match = detect_trigger(frame, params.trigger.templ, params.trigger.ncc_threshold);
  return msg;
}

}  // namespace

AttackPipeline::AttackPipeline(AttackParams params, CameraParams cam, int gate_threads)
    : params_(std::move(params)), cam_(std::move(cam)), gate_threads_(gate_threads) {
  params_.validate();
  cam_.validate();
  if (gate_threads_ != 1 && gate_threads_ != 2) {
    throw std::invalid_argument("AttackPipeline: gate_threads must be 1 or 2");
  }
}

std::vector<AttackLogEvent> AttackPipeline::run(FrameSource& frames, std::span<const float> audio,
                                                std::span<const double> manual_trigger_times,
                                                Sinks sinks) {
  AttackEngine engine(params_, cam_.fps());
  AudioGate gate(params_.noise_gate, cam_.audio_sample_rate_hz);

  struct Pending {
    Frame frame;
    std::int64_t audio_begin = 0, audio_end = 0;
    VideoGateMsg video;
  };
  std::deque<Pending> pending;
  std::deque<AudioGate::BlockVerdict> verdicts;
  std::int64_t verified_through = 0;
  std::vector<AttackLogEvent> log;
  double last_time = 0.0;

  auto manual_fired = [&](double t0, double t1) {
    return std::any_of(manual_trigger_times.begin(), manual_trigger_times.end(),
                       [&](double m) { return m >= t0 && m < t1; });
  };

  auto emit = [&](Pending& p) {
    // a frame's audio may span two gate blocks; noisy if any overlapping one is
    while (verdicts.size() > 1 && verdicts.front().end_sample <= p.audio_begin) {
      verdicts.pop_front();
    }
    bool noisy = false;
    for (const auto& v : verdicts) {
      if (v.end_sample <= p.audio_begin) continue;
      noisy = noisy || v.noisy;
      if (v.end_sample >= p.audio_end) break;
    }

    GateInputs g;
    g.motion = p.video.motion;
    g.changed_count = p.video.changed;
    g.noise = noisy;
    g.match = p.video.match;
    g.trigger_visible = p.video.match.has_value();
    const double t0 = p.frame.timestamp_s;
    const double t1 = t0 + cam_.frame_period_s();
    g.manual = manual_fired(t0, t1);
    last_time = t1;

    auto step = engine.step(
        p.frame, std::span<const float>(audio.data() + p.audio_begin,
                                        static_cast<std::size_t>(p.audio_end - p.audio_begin)),
        g);
    if (sinks.frame) sinks.frame(step.frame);
    if (sinks.audio) sinks.audio(step.audio);
    for (auto& e : step.events) {
      if (sinks.event) sinks.event(e);
      log.push_back(std::move(e));
    }
  };

  auto drain_ready = [&] {
    while (!pending.empty() && pending.front().audio_end <= verified_through) {
      emit(pending.front());
      pending.pop_front();
    }
  };

  const auto total_audio = static_cast<std::int64_t>(audio.size());

  // consume one gated frame; is_last pins the audio tail to the final frame
  auto consume = [&](GateItem&& item, bool is_last) {
    Pending p;
    p.audio_begin = std::min(cam_.frame_first_sample(item.msg.index), total_audio);
    p.audio_end = is_last ? total_audio
                          : std::min(cam_.frame_first_sample(item.msg.index + 1), total_audio);
    p.video = item.msg;
    p.frame = std::move(item.frame);
    for (const auto& v : gate.push(std::span<const float>(
             audio.data() + p.audio_begin, static_cast<std::size_t>(p.audio_end - p.audio_begin)))) {
      verdicts.push_back(v);
      verified_through = v.end_sample;
    }
    pending.push_back(std::move(p));
    drain_ready();
  };

  auto finish_stream = [&] {
    for (const auto& v : gate.flush()) {
      verdicts.push_back(v);
      verified_through = v.end_sample;
    }
    if (!pending.empty()) verified_through = std::max(verified_through, pending.back().audio_end);
    drain_ready();
  };

  if (gate_threads_ == 1) {
    Frame prev_blurred;
    bool have_prev = false;
    std::int64_t index = 0;
    std::optional<GateItem> held;
    std::optional<Frame> f;
    while ((f = frames.next())) {
      if (held) consume(std::move(*held), false);
      GateItem item;
      Frame blurred;
      item.msg = video_gate(index, *f, have_prev ? &prev_blurred : nullptr, blurred, params_);
      prev_blurred = std::move(blurred);
      have_prev = true;
      item.frame = std::move(*f);
      held = std::move(item);
      ++index;
    }
    if (held) consume(std::move(*held), true);
  } else {
    GateQueue queue(8);
    std::exception_ptr worker_error;
    std::thread worker([&] {
      try {
        Frame prev_blurred;
        bool have_prev = false;
        std::int64_t index = 0;
        std::optional<Frame> f;
        while ((f = frames.next())) {
          GateItem item;
          Frame blurred;
          item.msg = video_gate(index, *f, have_prev ? &prev_blurred : nullptr, blurred, params_);
          prev_blurred = std::move(blurred);
          have_prev = true;
          item.frame = std::move(*f);
          queue.push(std::move(item));
          ++index;
        }
        queue.push(std::nullopt);
      } catch (...) {
        worker_error = std::current_exception();
        queue.push(std::nullopt);
      }
    });
    std::optional<GateItem> held;
    while (auto item = queue.pop()) {
      if (held) consume(std::move(*held), false);
      held = std::move(item);
    }
    worker.join();
    if (worker_error) std::rethrow_exception(worker_error);
    if (held) consume(std::move(*held), true);
  }
  finish_stream();

  auto tail = engine.finish(last_time);
  for (auto& e : tail) {
    if (sinks.event) sinks.event(e);
    log.push_back(std::move(e));
  }
  return log;
}

void write_event_log_csv(const std::filesystem::path& path,
                         std::span<const AttackLogEvent> events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_event_log_csv: cannot open " + path.string());
  out << "time_s,event,detail\n";
  char buf[64];
  for (const auto& e : events) {
    std::snprintf(buf, sizeof(buf), "%.6f", e.time_s);
    out << buf << ',' << to_string(e.type) << ',' << e.detail << '\n';
  }
}

std::vector<AttackLogEvent> read_event_log_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_event_log_csv: cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<AttackLogEvent> events;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw std::runtime_error("event log: malformed row: " + line);
    }
    AttackLogEvent e;
    e.time_s = std::stod(line.substr(0, c1));
    const auto name = line.substr(c1 + 1, c2 - c1 - 1);
    bool found = false;
    for (int t = 0; t <= static_cast<int>(AttackEventType::warning); ++t) {
      if (name == to_string(static_cast<AttackEventType>(t))) {
        e.type = static_cast<AttackEventType>(t);
        found = true;
        break;
      }
    }
    if (!found) throw std::runtime_error("event log: unknown event '" + name + "'");
    e.detail = line.substr(c2 + 1);
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<std::pair<double, double>> replay_intervals(std::span<const AttackLogEvent> events,
                                                        double stream_end_s) {
  std::vector<std::pair<double, double>> out;
  bool open = false;
  double open_t = 0.0;
  for (const auto& e : events) {
    if (e.type == AttackEventType::replay_start && !open) {
      open = true;
      open_t = e.time_s;
    }
    if (e.type == AttackEventType::replay_end && open) {
      out.emplace_back(open_t, e.time_s);
      open = false;
    }
  }
  if (open) out.emplace_back(open_t, stream_end_s);
  return out;
}

}  // namespace enfsim
