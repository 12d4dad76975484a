#pragma once

// Linear rate-demand stick law, first-order rate tracking with an
// acceleration clamp, and fuel accounting as integrated angular impulse.

#include <array>

#include "deorbit/vec.hpp"

namespace deorbit {

/// Stick deflection per axis in [-1, 1]. Default mapping: x -> roll, y -> pitch, z (twist) -> yaw.
struct StickInput {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double t = 0.0;

    /// Copy with every axis clamped to [-1, 1]; non-finite axes become 0.
    StickInput clamped() const;
};

struct ControlConfig {
    double max_rate = 3.0;    // deg/s at full deflection
    double deadband = 0.02;   // fraction of full deflection
    double tau = 0.5;         // s
    double alpha_max = 3.0;   // deg/s^2
    double fuel_gain = 1.0;   // fuel units per deg/s of angular impulse
    /// Body axis (0 roll, 1 pitch, 2 yaw) driven by stick x, y, z.
    std::array<int, 3> axis_map{0, 1, 2};

    void validate() const;
};

/// Rate command in deg/s, body axes.
Vec3 stick_to_rate(const StickInput& s, const ControlConfig& cfg);

struct RateStep {
    Vec3 omega;  // deg/s after the step
    Vec3 alpha;  // deg/s^2 applied during the step
};

RateStep rate_track_step(const Vec3& omega, const Vec3& cmd, const ControlConfig& cfg, double dt);

double fuel_increment(const Vec3& alpha, const ControlConfig& cfg, double dt);

class FuelMeter {
public:
    double consumed() const noexcept { return consumed_; }

    /// Throws DomainError on a negative or non-finite increment.
    void add(double fuel);

private:
    double consumed_ = 0.0;
};

}  // namespace deorbit
