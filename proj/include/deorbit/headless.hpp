#pragma once

#include <cstdint>

#include "deorbit/policy.hpp"
#include "deorbit/session/trial_log.hpp"

namespace deorbit {

/// Steps a trial to a terminal phase, feeding the policy only the configured camera's view.
/// When `recorder` is given the full telemetry log is written through it.
TrialResult run_headless(const TaskConfig& cfg, Policy& policy, const OrbitEnv& env, double dt,
                         Cohort cohort = Cohort::Pilot, TrialRecorder* recorder = nullptr);

/// Initial attitude offset for a seeded trial. Seed 0 is the reference offset
/// (yaw 104, pitch 0, roll 102); other seeds draw yaw and roll uniformly in
/// [-120, 120) and pitch in [-20, 20) from mt19937_64.
EulerError seeded_offset(std::uint64_t seed);

PolicyContext policy_context_for(const TaskConfig& cfg, double dt);

}  // namespace deorbit
