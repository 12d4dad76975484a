#pragma once

// Per-tick telemetry records and the JSON forms shared by trial logs and the
// cockpit wire protocol.

#include <cstdint>

#include "json.hpp"

#include "deorbit/task.hpp"

namespace deorbit {

using Json = nlohmann::json;

struct TelemetryFrame {
    std::uint64_t tick = 0;
    double t = 0.0;
    Vec3 position;
    Vec3 velocity;
    Quat q;
    Vec3 omega;
    StickInput stick;
    double fuel = 0.0;
    EulerError err;
    ViewObservation obs;
    TrialPhase phase = TrialPhase::Running;
};

TelemetryFrame make_frame(const TrialState& state, const ViewObservation& obs);

/// Frame fields without a "kind" tag. `include_err` false drops the attitude error.
Json frame_fields(const TelemetryFrame& f, bool include_err);

/// Decides which simulation ticks produce a telemetry frame. Frame j is due on
/// the first tick whose time reaches j / rate; terminal ticks always emit.
class TelemetryClock {
public:
    TelemetryClock(double dt, double rate_hz) : dt_(dt), rate_hz_(rate_hz) {}

    bool due(std::uint64_t tick, bool terminal);

private:
    double dt_;
    double rate_hz_;
    std::uint64_t emitted_ = 0;
};

Json to_json(const OrbitEnv& env);
Json to_json(const ControlConfig& c);
Json to_json(const TaskConfig& c);
Json to_json(const TrialResult& r);
Json to_json(const ViewObservation& o);

/// Fields missing from `j` keep their value from `base`; present fields must have the right type.
OrbitEnv orbit_env_from_json(const Json& j, OrbitEnv base = {});
ControlConfig control_config_from_json(const Json& j, ControlConfig base = {});
TaskConfig task_config_from_json(const Json& j, TaskConfig base = {});
TrialResult trial_result_from_json(const Json& j);

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string content_hash(std::string_view text);

}  // namespace deorbit
