#pragma once

// De-orbit attitude trial: configuration, per-tick state machine and outcome.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "deorbit/control.hpp"
#include "deorbit/sim_core.hpp"
#include "deorbit/viewport.hpp"

namespace deorbit {

enum class Cohort { Pilot, Civilian };

std::string_view to_string(Cohort c);
Cohort parse_cohort(std::string_view s);

struct Tolerance {
    double pitch = 1.0;  // deg
    double roll = 1.0;   // deg
    double yaw = 6.0;    // deg
};

struct TaskConfig {
    EulerError initial_offset{104.0, 0.0, 102.0};
    Tolerance tolerance{};
    double hold_time = 5.0;   // s, tolerance must hold continuously this long
    double timeout = 600.0;   // s
    bool hud_attitude_visible = false;
    CameraId view = CameraId::Bottom;
    ControlConfig control{};

    /// Throws ValidationError on non-positive tolerances, negative hold or timeout <= hold.
    void validate() const;
};

enum class TrialPhase { Running, Succeeded, TimedOut };

std::string_view to_string(TrialPhase p);
TrialPhase parse_phase(std::string_view s);

struct TrialState {
    TrialPhase phase = TrialPhase::Running;
    std::uint64_t tick = 0;
    double elapsed = 0.0;
    std::optional<double> in_tolerance_since;
    std::uint64_t in_tolerance_tick = 0;
    FuelMeter fuel;
    EciState eci;
    AttitudeState att;
    EulerError err;        // against the de-orbit reference at the current tick
    StickInput stick;      // input applied on the last tick (clamped)
};

struct TrialResult {
    CameraId view = CameraId::Bottom;
    Cohort cohort = Cohort::Pilot;
    double completion_time = 0.0;
    double fuel = 0.0;
    bool success = false;
    std::string input_log_ref;
};

TrialState init_trial(const TaskConfig& cfg, const OrbitEnv& env);

/// Applies stick -> rate command -> rate tracking -> attitude and orbit integration for one tick.
/// Throws StateError when the trial is already terminal.
TrialState step_trial(const TrialState& state, const StickInput& stick, const TaskConfig& cfg,
                      const OrbitEnv& env, double dt);

/// Inclusive tolerance check.
bool check_success(const EulerError& err, const TaskConfig& cfg);

/// Observation of the trial's configured camera at the current state.
ViewObservation trial_observation(const TrialState& state, const TaskConfig& cfg, const OrbitEnv& env);

/// Summarises a terminal (or aborted) trial. Unsuccessful trials report the timeout.
TrialResult make_result(const TrialState& state, const TaskConfig& cfg, Cohort cohort,
                        std::string input_log_ref);

}  // namespace deorbit
