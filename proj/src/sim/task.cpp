#include "deorbit/task.hpp"

#include <cmath>
#include <string>

#include "deorbit/errors.hpp"

namespace deorbit {

std::string_view to_string(Cohort c) { return c == Cohort::Pilot ? "pilot" : "civilian"; }

Cohort parse_cohort(std::string_view s) {
    if (s == "pilot") return Cohort::Pilot;
    if (s == "civilian") return Cohort::Civilian;
    throw ValidationError("unknown cohort '" + std::string(s) + "' (expected pilot or civilian)");
}

std::string_view to_string(TrialPhase p) {
    switch (p) {
        case TrialPhase::Running: return "running";
        case TrialPhase::Succeeded: return "succeeded";
        case TrialPhase::TimedOut: return "timed_out";
    }
    return "running";
}

TrialPhase parse_phase(std::string_view s) {
    if (s == "running") return TrialPhase::Running;
    if (s == "succeeded") return TrialPhase::Succeeded;
    if (s == "timed_out") return TrialPhase::TimedOut;
    throw ValidationError("unknown phase '" + std::string(s) + "'");
}

void TaskConfig::validate() const {
    if (!(tolerance.pitch > 0.0 && tolerance.roll > 0.0 && tolerance.yaw > 0.0)) {
        throw ValidationError("tolerances must be positive");
    }
    if (!(hold_time >= 0.0)) throw ValidationError("hold_time must be non-negative");
    if (!(timeout > hold_time)) throw ValidationError("timeout must exceed hold_time");
    if (!std::isfinite(timeout)) throw ValidationError("timeout must be finite");
    if (!std::isfinite(initial_offset.yaw) || !std::isfinite(initial_offset.pitch) ||
        !std::isfinite(initial_offset.roll)) {
        throw ValidationError("initial offset must be finite");
    }
    control.validate();
}

bool check_success(const EulerError& err, const TaskConfig& cfg) {
    return std::abs(err.pitch) <= cfg.tolerance.pitch && std::abs(err.roll) <= cfg.tolerance.roll &&
           std::abs(err.yaw) <= cfg.tolerance.yaw;
}

TrialState init_trial(const TaskConfig& cfg, const OrbitEnv& env) {
    cfg.validate();
    env.validate();
    TrialState s;
    s.eci = circular_init(env, env.altitude_nominal);
    // Offset applied yaw -> pitch -> roll so the 3-2-1 readback returns the configured triple.
    s.att.q = normalized(deorbit_reference(s.eci) * euler_to_quat(cfg.initial_offset));
    s.att.omega = {};
    s.err = attitude_error(s.att.q, deorbit_reference(s.eci));
    if (check_success(s.err, cfg)) {
        s.in_tolerance_since = 0.0;
        if (cfg.hold_time <= 0.0) s.phase = TrialPhase::Succeeded;
    }
    return s;
}

TrialState step_trial(const TrialState& state, const StickInput& stick, const TaskConfig& cfg,
                      const OrbitEnv& env, double dt) {
    if (state.phase != TrialPhase::Running) throw StateError("step_trial: trial is not running");
    if (!(dt > 0.0)) throw DomainError("step_trial: dt must be positive");

    TrialState next = state;
    next.stick = stick.clamped();
    next.stick.t = state.elapsed;

    const Vec3 cmd = stick_to_rate(next.stick, cfg.control);
    const RateStep rs = rate_track_step(state.att.omega, cmd, cfg.control, dt);
    next.att = integrate_attitude({state.att.q, rs.omega}, dt);
    next.fuel.add(fuel_increment(rs.alpha, cfg.control, dt));

    next.tick = state.tick + 1;
    next.elapsed = static_cast<double>(next.tick) * dt;
    next.eci = rk4_step(state.eci, env, dt);
    next.eci.t = next.elapsed;

    next.err = attitude_error(next.att.q, deorbit_reference(next.eci));
    if (check_success(next.err, cfg)) {
        if (!next.in_tolerance_since) {
            next.in_tolerance_since = next.elapsed;
            next.in_tolerance_tick = next.tick;
        }
        const double held = static_cast<double>(next.tick - next.in_tolerance_tick) * dt;
        if (held >= cfg.hold_time - 1e-9) next.phase = TrialPhase::Succeeded;
    } else {
        next.in_tolerance_since.reset();
    }
    if (next.phase == TrialPhase::Running && next.elapsed >= cfg.timeout - 1e-9) {
        next.phase = TrialPhase::TimedOut;
    }
    return next;
}

ViewObservation trial_observation(const TrialState& state, const TaskConfig& cfg, const OrbitEnv& env) {
    return observe(state.eci, state.att, CameraSpec::for_view(cfg.view), env);
}

TrialResult make_result(const TrialState& state, const TaskConfig& cfg, Cohort cohort,
                        std::string input_log_ref) {
    TrialResult r;
    r.view = cfg.view;
    r.cohort = cohort;
    r.success = state.phase == TrialPhase::Succeeded;
    r.completion_time = r.success ? state.elapsed : cfg.timeout;
    r.fuel = state.fuel.consumed();
    r.input_log_ref = std::move(input_log_ref);
    return r;
}

}  // namespace deorbit
