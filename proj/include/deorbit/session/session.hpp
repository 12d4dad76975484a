#pragma once

// One live trial, independent of any transport. The owner calls tick() at the
// simulation rate and forwards the returned messages to the cockpit; stick
// values are latched (last write wins) and consumed once per tick.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "deorbit/session/protocol.hpp"
#include "deorbit/session/trial_log.hpp"

namespace deorbit {

struct SessionOptions {
    std::filesystem::path data_dir = ".";
    OrbitEnv env{};
    double dt = kInteractiveDt;
    double telemetry_hz = kDefaultTelemetryHz;
};

class Session {
public:
    /// Opens `<data_dir>/<id>.jsonl` and records the initial state. The config
    /// must already be valid. Throws DataError when the log cannot be created.
    Session(std::string id, const TaskConfig& cfg, Cohort cohort, const SessionOptions& opt);
    ~Session();

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    const std::string& id() const { return id_; }
    const TaskConfig& config() const { return cfg_; }
    const TrialState& state() const { return state_; }
    bool terminal() const { return result_.has_value(); }
    const std::optional<TrialResult>& result() const { return result_; }

    /// Telemetry message for the initial state.
    const Json& first_message() const { return first_; }

    /// Latches a stick value for the next tick. Throws StateError once terminal.
    void latch_stick(const StickInput& s);

    /// Advances one tick. Returns the telemetry message if a frame was due and,
    /// on reaching a terminal phase, the result message. No-op when terminal.
    std::vector<Json> tick();

    /// Ends a running trial as unsuccessful. Throws StateError once terminal.
    std::vector<Json> abort();

    std::uint64_t stick_writes() const { return stick_writes_; }
    std::uint64_t stick_overwrites() const { return stick_overwrites_; }

    std::filesystem::path log_path() const;
    std::filesystem::path result_path() const;

private:
    Json finish(EndReason reason);

    std::string id_;
    TaskConfig cfg_;
    Cohort cohort_;
    SessionOptions opt_;
    std::ofstream log_;
    std::unique_ptr<TrialRecorder> recorder_;
    TrialState state_;
    StickInput latched_{};
    bool fresh_ = false;  // latched value not yet consumed by a tick
    std::optional<TrialResult> result_;
    Json first_;
    std::uint64_t stick_writes_ = 0;
    std::uint64_t stick_overwrites_ = 0;
};

/// Client-facing state machine for one connection: parses frames, owns at most
/// one session at a time and turns protocol errors into error messages.
class SessionController {
public:
    explicit SessionController(SessionOptions opt, TaskConfig defaults = {});

    /// Handles one client frame; returns the messages to send back.
    std::vector<Json> handle(std::string_view text);

    /// Advances the active session by one tick.
    std::vector<Json> tick();

    /// Aborts a running session (used when the connection drops).
    void disconnect();

    bool running() const { return session_ && !session_->terminal(); }
    const Session* session() const { return session_.get(); }
    std::uint64_t sessions_started() const { return started_; }
    std::uint64_t stick_messages() const { return sticks_; }

private:

    SessionOptions opt_;
    TaskConfig defaults_;
    std::unique_ptr<Session> session_;
    std::uint64_t started_ = 0;
    std::uint64_t sticks_ = 0;
};

/// Process-unique session identifier: UTC timestamp, process-wide counter and a random suffix.
std::string make_session_id();

}  // namespace deorbit
