#include "deorbit/headless.hpp"

#include <random>

namespace deorbit {

namespace {

// Portable uniform double in [0, 1): the top 53 bits of one mt19937_64 draw.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

EulerError seeded_offset(std::uint64_t seed) {
    if (seed == 0) return {104.0, 0.0, 102.0};
    std::mt19937_64 rng(seed);
    EulerError e;
    e.yaw = -120.0 + 240.0 * unit_draw(rng);
    e.pitch = -20.0 + 40.0 * unit_draw(rng);
    e.roll = -120.0 + 240.0 * unit_draw(rng);
    return e;
}

PolicyContext policy_context_for(const TaskConfig& cfg, double dt) {
    return {cfg.control, dt, CameraSpec::for_view(cfg.view)};
}

TrialResult run_headless(const TaskConfig& cfg, Policy& policy, const OrbitEnv& env, double dt,
                         Cohort cohort, TrialRecorder* recorder) {
    TrialState state = init_trial(cfg, env);
    ViewObservation obs = trial_observation(state, cfg, env);
    if (recorder) recorder->begin(state, obs);

    while (state.phase == TrialPhase::Running) {
        const StickInput stick = policy.act(obs).clamped();
        state = step_trial(state, stick, cfg, env, dt);
        obs = trial_observation(state, cfg, env);
        if (recorder) recorder->record_tick(state.stick, state, obs);
    }
    if (recorder) {
        recorder->end(state.phase == TrialPhase::Succeeded ? EndReason::Succeeded : EndReason::TimedOut, state);
    }
    return make_result(state, cfg, cohort, recorder ? recorder->header().log_name() : std::string{});
}

}  // namespace deorbit
