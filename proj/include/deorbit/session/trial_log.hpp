#pragma once

// Line-delimited trial logs and deterministic replay.
//
// A log is one JSON object per line:
//   {"kind":"header", ...}   configuration, environment, tick period and config_hash
//   {"kind":"frame", ...}    telemetry frame (tick 0 first)
//   {"kind":"input", "tick":k, "x","y","z"}   stick latched for tick k
//   {"kind":"end", "reason", "tick"}
// Frames follow the input of the tick that produced them. Replaying the
// inputs through the simulator must regenerate every frame line byte for byte.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "deorbit/session/telemetry.hpp"

namespace deorbit {

inline constexpr double kDefaultTelemetryHz = 30.0;
inline constexpr double kInteractiveDt = 0.02;

struct LogHeader {
    std::string session;
    Cohort cohort = Cohort::Pilot;
    TaskConfig config{};
    OrbitEnv env{};
    double dt = kInteractiveDt;
    double telemetry_hz = kDefaultTelemetryHz;
    std::optional<std::uint64_t> seed;

    Json to_json() const;
    /// Hash over everything that determines the simulated trajectory.
    std::string config_hash() const;
    std::string log_name() const { return session + ".jsonl"; }
};

enum class EndReason { Succeeded, TimedOut, Aborted };

std::string_view to_string(EndReason r);

class TrialRecorder {
public:
    TrialRecorder(std::ostream& out, LogHeader header);

    const LogHeader& header() const { return header_; }

    /// Writes the header and the tick-0 frame.
    TelemetryFrame begin(const TrialState& initial, const ViewObservation& obs);

    /// Records the stick applied on the tick that produced `state`; returns a frame when one is due.
    std::optional<TelemetryFrame> record_tick(const StickInput& applied, const TrialState& state,
                                              const ViewObservation& obs);

    void end(EndReason reason, const TrialState& state);

private:
    void write(const Json& j);

    std::ostream& out_;
    LogHeader header_;
    TelemetryClock clock_;
};

/// Text of a frame line exactly as it appears in a log.
std::string frame_line(const TelemetryFrame& f);

struct ReplayOutcome {
    LogHeader header;
    TrialResult result;
    EndReason reason = EndReason::TimedOut;
    std::uint64_t ticks = 0;
    std::size_t frames = 0;
};

/// Re-simulates a log from its header and inputs, verifying every frame.
/// Throws IntegrityError naming the offending line.
ReplayOutcome replay(std::istream& log);
ReplayOutcome replay_file(const std::filesystem::path& path);

}  // namespace deorbit
