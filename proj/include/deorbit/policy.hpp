#pragma once

// Scripted pilots for headless benchmarking. A policy sees nothing but the
// ViewObservation of its camera; true attitude never crosses this interface.

#include <memory>
#include <optional>
#include <string_view>

#include "deorbit/control.hpp"
#include "deorbit/viewport.hpp"

namespace deorbit {

/// What a pilot knows about the vehicle: its stick law, the tick period and the camera it looks through.
struct PolicyContext {
    ControlConfig control{};
    double dt = 0.02;
    CameraSpec camera = CameraSpec::bottom();
};

class Policy {
public:
    virtual ~Policy() = default;
    virtual StickInput act(const ViewObservation& obs) = 0;
    virtual std::string_view name() const = 0;
};

/// Stick deflection that makes stick_to_rate produce `body_rate` (saturating at max_rate).
StickInput rates_to_stick(const Vec3& body_rate, const ControlConfig& cfg);

struct BottomPolicyConfig {
    double offset_gain = 0.6;     // deg/s of rate per deg of disk offset
    double capture = 0.5;         // deg; yaw alignment starts below this offset
    double release = 5.0;         // deg; yaw alignment suspended above this offset
    double yaw_gain = 0.6;        // deg/s per deg of ground-flow error
    double flow_reference = -90.0;  // deg; ground-flow direction at the de-orbit attitude
    Vec3 search_rate{0.0, -1.5, 0.0};  // deg/s while the Earth is out of view
};

/// Centres the Earth disk with pitch/roll, then aligns the ground flow with yaw.
class BottomPolicy final : public Policy {
public:
    explicit BottomPolicy(PolicyContext ctx, BottomPolicyConfig cfg = {});
    StickInput act(const ViewObservation& obs) override;
    std::string_view name() const override { return "bottom"; }

    bool yaw_alignment_active() const { return captured_; }

private:
    PolicyContext ctx_;
    BottomPolicyConfig cfg_;
    bool captured_ = false;
};

struct FrontPolicyConfig {
    double level_gain = 0.6;       // deg/s per deg of tilt / elevation error
    double level_capture = 0.3;    // deg
    double settle_time = 3.0;      // s level before an observation window starts
    double observe_window = 20.0;  // s of hands-off hold
    double observe_lead_in = 1.0;  // s into the window before the first sample is taken
    double yaw_gain = 0.8;         // fraction of the inferred heading error corrected per cycle
    double yaw_done = 3.0;         // deg; inferred errors below this end the heading search
    double slew_gain = 0.5;        // deg/s per deg of remaining slew
    Vec3 search_rate{0.0, -1.5, 0.0};
};

/// Levels the horizon arc, then holds attitude and infers heading error from
/// how the arc tilts and rises as the orbit carries the local vertical around.
class FrontPolicy final : public Policy {
public:
    enum class Stage { Search, Level, Observe, Slew, Done };

    explicit FrontPolicy(PolicyContext ctx, FrontPolicyConfig cfg = {});
    StickInput act(const ViewObservation& obs) override;
    std::string_view name() const override { return "front"; }

    Stage stage() const { return stage_; }
    /// Heading error inferred by the most recent observation window, deg.
    std::optional<double> last_heading_estimate() const { return last_estimate_; }

private:
    Vec3 level_rates(const ViewObservation& obs) const;
    void begin(Stage s, double t);

    PolicyContext ctx_;
    FrontPolicyConfig cfg_;
    Stage stage_ = Stage::Level;
    double stage_start_ = 0.0;
    std::optional<double> level_since_;
    std::optional<double> tilt_start_, elev_start_;
    std::optional<double> last_estimate_;
    double slew_target_ = 0.0;
    double slew_angle_ = 0.0;  // predicted from the stick law
    double slew_rate_ = 0.0;
};

/// Hands off the stick.
class IdlePolicy final : public Policy {
public:
    StickInput act(const ViewObservation& obs) override { return {0.0, 0.0, 0.0, obs.t}; }
    std::string_view name() const override { return "idle"; }
};

enum class PolicyKind { Bottom, Front, Idle };

std::string_view to_string(PolicyKind k);
PolicyKind parse_policy_kind(std::string_view s);

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PolicyContext& ctx);

}  // namespace deorbit
