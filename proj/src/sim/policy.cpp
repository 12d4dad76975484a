#include "deorbit/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deorbit/errors.hpp"

namespace deorbit {

namespace {

double clamp_rate(double r, double max_rate) { return std::clamp(r, -max_rate, max_rate); }

// Body-frame direction of a (az, el) camera offset.
Vec3 direction_from_angles(const ViewAngles& a, const CameraSpec& cam) {
    const double az = a.az * kDegToRad, el = a.el * kDegToRad;
    return std::cos(el) * std::sin(az) * cam.right() + std::sin(el) * cam.up +
           std::cos(el) * std::cos(az) * cam.boresight;
}

}  // namespace

StickInput rates_to_stick(const Vec3& body_rate, const ControlConfig& cfg) {
    double axes[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
        const double r = body_rate[cfg.axis_map[static_cast<std::size_t>(i)]];
        if (r == 0.0) continue;
        const double frac = std::min(std::abs(r) / cfg.max_rate, 1.0);
        axes[i] = std::copysign(cfg.deadband + frac * (1.0 - cfg.deadband), r);
    }
    return {axes[0], axes[1], axes[2], 0.0};
}

// --- bottom view ------------------------------------------------------------

BottomPolicy::BottomPolicy(PolicyContext ctx, BottomPolicyConfig cfg) : ctx_(ctx), cfg_(cfg) {}

StickInput BottomPolicy::act(const ViewObservation& obs) {
    const CameraSpec& cam = ctx_.camera;
    Vec3 rate;
    if (!obs.earth_visible || !obs.disk_center_offset) {
        captured_ = false;
        rate = cfg_.search_rate;
    } else {
        const Vec3 nadir = direction_from_angles(*obs.disk_center_offset, cam);
        const double offset = angle_between(cam.boresight, nadir) * kRadToDeg;
        Vec3 axis = cross(cam.boresight, nadir);
        const double axis_norm = norm(axis);
        if (axis_norm > 1e-12) {
            // Rotating about boresight x nadir swings the boresight onto the Earth centre.
            const double mag = std::min(cfg_.offset_gain * offset, ctx_.control.max_rate);
            rate = axis * (mag / axis_norm);
        } else if (offset > 90.0) {
            rate = cfg_.search_rate;
        }

        if (offset < cfg_.capture) captured_ = true;
        if (offset > cfg_.release) captured_ = false;
        if (captured_ && obs.ground_flow_direction) {
            const double flow_err = wrap_deg(*obs.ground_flow_direction - cfg_.flow_reference);
            rate += cam.boresight * clamp_rate(cfg_.yaw_gain * flow_err, ctx_.control.max_rate);
        }
    }
    StickInput s = rates_to_stick(rate, ctx_.control);
    s.t = obs.t;
    return s;
}

// --- front view -------------------------------------------------------------

FrontPolicy::FrontPolicy(PolicyContext ctx, FrontPolicyConfig cfg) : ctx_(ctx), cfg_(cfg) {}

void FrontPolicy::begin(Stage s, double t) {
    stage_ = s;
    stage_start_ = t;
    level_since_.reset();
    tilt_start_.reset();
    elev_start_.reset();
}

Vec3 FrontPolicy::level_rates(const ViewObservation& obs) const {
    const CameraSpec& cam = ctx_.camera;
    const double elev_ref = *obs.disk_angular_radius - 90.0;
    const double roll_rate = clamp_rate(-cfg_.level_gain * *obs.horizon_arc_tilt, ctx_.control.max_rate);
    const double pitch_rate =
        clamp_rate(cfg_.level_gain * (*obs.horizon_elevation - elev_ref), ctx_.control.max_rate);
    return cam.boresight * roll_rate + cam.right() * pitch_rate;
}

StickInput FrontPolicy::act(const ViewObservation& obs) {
    const double t = obs.t;
    const bool usable = obs.earth_visible && obs.horizon_arc_tilt && obs.horizon_elevation &&
                        obs.disk_angular_radius;

    if (!usable) {
        if (stage_ != Stage::Search) begin(Stage::Search, t);
        StickInput s = rates_to_stick(cfg_.search_rate, ctx_.control);
        s.t = t;
        return s;
    }
    if (stage_ == Stage::Search) begin(Stage::Level, t);

    const double tilt = *obs.horizon_arc_tilt;
    const double elev_err = *obs.horizon_elevation - (*obs.disk_angular_radius - 90.0);
    Vec3 rate;

    switch (stage_) {
        case Stage::Search:
        case Stage::Level: {
            rate = level_rates(obs);
            const bool level = std::abs(tilt) < cfg_.level_capture && std::abs(elev_err) < cfg_.level_capture;
            if (!level) {
                level_since_.reset();
            } else if (!level_since_) {
                level_since_ = t;
            } else if (t - *level_since_ >= cfg_.settle_time) {
                begin(Stage::Observe, t);
                rate = {};
            }
            break;
        }
        case Stage::Observe: {
            // Hands off: the stick is exactly neutral for the whole window.
            rate = {};
            const double into = t - stage_start_;
            if (!tilt_start_ && into >= cfg_.observe_lead_in) {
                tilt_start_ = tilt;
                elev_start_ = *obs.horizon_elevation;
            }
            if (tilt_start_ && into >= cfg_.observe_window) {
                const double d_tilt = wrap_deg(tilt - *tilt_start_);
                const double d_elev = *obs.horizon_elevation - *elev_start_;
                // Holding inertially, the local vertical drifts toward the boresight
                // (elevation rises) and sideways in proportion to the heading error.
                const double heading = std::atan2(-d_tilt, d_elev) * kRadToDeg;
                last_estimate_ = heading;
                if (std::abs(heading) <= cfg_.yaw_done) {
                    begin(Stage::Done, t);
                } else {
                    begin(Stage::Slew, t);
                    slew_target_ = -cfg_.yaw_gain * heading;
                    slew_angle_ = 0.0;
                    slew_rate_ = 0.0;
                }
            }
            break;
        }
        case Stage::Slew: {
            rate = level_rates(obs);
            const double remaining = slew_target_ - slew_angle_;
            const double yaw_rate = clamp_rate(cfg_.slew_gain * remaining, ctx_.control.max_rate);
            if (std::abs(remaining) < 0.05 && std::abs(slew_rate_) < 0.02) {
                begin(Stage::Level, t);
                break;
            }
            // The slew is flown open loop against the known stick law, since
            // heading itself is not visible in this view.
            const Vec3 cmd = stick_to_rate(rates_to_stick({0, 0, yaw_rate}, ctx_.control), ctx_.control);
            const RateStep step = rate_track_step({0, 0, slew_rate_}, {0, 0, cmd.z}, ctx_.control, ctx_.dt);
            slew_rate_ = step.omega.z;
            slew_angle_ += slew_rate_ * ctx_.dt;
            rate.z = yaw_rate;
            break;
        }
        case Stage::Done:
            rate = level_rates(obs);
            break;
    }

    StickInput s = rates_to_stick(rate, ctx_.control);
    s.t = t;
    return s;
}

std::string_view to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::Bottom: return "bottom";
        case PolicyKind::Front: return "front";
        case PolicyKind::Idle: return "idle";
    }
    return "idle";
}

PolicyKind parse_policy_kind(std::string_view s) {
    if (s == "bottom") return PolicyKind::Bottom;
    if (s == "front") return PolicyKind::Front;
    if (s == "idle") return PolicyKind::Idle;
    throw ValidationError("unknown policy '" + std::string(s) + "'");
}

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PolicyContext& ctx) {
    switch (kind) {
        case PolicyKind::Bottom: return std::make_unique<BottomPolicy>(ctx);
        case PolicyKind::Front: return std::make_unique<FrontPolicy>(ctx);
        case PolicyKind::Idle: return std::make_unique<IdlePolicy>();
    }
    return std::make_unique<IdlePolicy>();
}

}  // namespace deorbit
