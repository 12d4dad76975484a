#include "deorbit/control.hpp"

#include <algorithm>
#include <cmath>

#include "deorbit/errors.hpp"

namespace deorbit {

namespace {

double clamp_axis(double v) {
    if (!std::isfinite(v)) return 0.0;
    return std::clamp(v, -1.0, 1.0);
}

double shape_axis(double s, const ControlConfig& cfg) {
    const double mag = std::abs(s);
    if (mag <= cfg.deadband) return 0.0;
    const double out = cfg.max_rate * (mag - cfg.deadband) / (1.0 - cfg.deadband);
    return std::copysign(std::min(out, cfg.max_rate), s);
}

}  // namespace

StickInput StickInput::clamped() const { return {clamp_axis(x), clamp_axis(y), clamp_axis(z), t}; }

void ControlConfig::validate() const {
    if (!(max_rate > 0.0)) throw ValidationError("max_rate must be positive");
    if (!(deadband >= 0.0 && deadband < 1.0)) throw ValidationError("deadband must be in [0, 1)");
    if (!(tau > 0.0)) throw ValidationError("tau must be positive");
    if (!(alpha_max > 0.0)) throw ValidationError("alpha_max must be positive");
    if (!(fuel_gain >= 0.0)) throw ValidationError("fuel_gain must be non-negative");
    std::array<bool, 3> seen{};
    for (int a : axis_map) {
        if (a < 0 || a > 2 || seen[static_cast<std::size_t>(a)]) {
            throw ValidationError("axis_map must be a permutation of {0, 1, 2}");
        }
        seen[static_cast<std::size_t>(a)] = true;
    }
}

Vec3 stick_to_rate(const StickInput& s, const ControlConfig& cfg) {
    const StickInput c = s.clamped();
    const double axes[3] = {c.x, c.y, c.z};
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[cfg.axis_map[static_cast<std::size_t>(i)]] = shape_axis(axes[i], cfg);
    return out;
}

RateStep rate_track_step(const Vec3& omega, const Vec3& cmd, const ControlConfig& cfg, double dt) {
    if (!(dt > 0.0)) throw DomainError("rate_track_step: dt must be positive");
    RateStep r;
    for (int i = 0; i < 3; ++i) {
        const double a = std::clamp((cmd[i] - omega[i]) / cfg.tau, -cfg.alpha_max, cfg.alpha_max);
        r.alpha[i] = a;
        r.omega[i] = omega[i] + a * dt;
    }
    return r;
}

double fuel_increment(const Vec3& alpha, const ControlConfig& cfg, double dt) {
    if (!(dt > 0.0)) throw DomainError("fuel_increment: dt must be positive");
    return cfg.fuel_gain * (std::abs(alpha.x) + std::abs(alpha.y) + std::abs(alpha.z)) * dt;
}

void FuelMeter::add(double fuel) {
    if (!(fuel >= 0.0) || !std::isfinite(fuel)) throw DomainError("fuel increment must be non-negative");
    consumed_ += fuel;
}

}  // namespace deorbit
