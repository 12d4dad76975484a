#pragma once

// Camera geometry for the two external views and the cues a pilot can see
// through them. Cameras use an angular (az/el) model rather than a pinhole
// projection, so fields of view up to 180 degrees stay well defined.
//
// Camera axes: boresight b, up u, right r = b x u. For a direction d:
//   az = atan2(d.r, d.b), el = asin(d.u), both in degrees.
// A direction is inside the field of view when |az| <= fov_h/2 and |el| <= fov_v/2.

#include <optional>
#include <string_view>

#include "deorbit/sim_core.hpp"

namespace deorbit {

enum class CameraId { Bottom, Front };

std::string_view to_string(CameraId id);
/// Accepts "bottom" / "front" (case-insensitive). Throws ValidationError otherwise.
CameraId parse_camera_id(std::string_view s);

struct CameraSpec {
    CameraId id = CameraId::Bottom;
    Vec3 boresight;  // body frame
    Vec3 up;         // body frame, perpendicular to boresight
    double fov_h = 0.0;  // deg
    double fov_v = 0.0;  // deg

    Vec3 right() const { return cross(boresight, up); }
    void validate() const;

    /// Nadir-looking 145 x 145 deg camera: boresight +Z_b, image up +Y_b.
    static CameraSpec bottom();
    /// Retrograde-looking 70 x 70 deg camera: boresight +X_b, image up -Z_b.
    static CameraSpec front();
    static CameraSpec for_view(CameraId id) { return id == CameraId::Bottom ? bottom() : front(); }
};

struct ViewAngles {
    double az = 0.0;
    double el = 0.0;
};

/// Angular offsets of a body-frame unit direction from the boresight, regardless of FOV.
ViewAngles view_angles(const Vec3& d_body, const CameraSpec& cam);

bool inside_fov(const ViewAngles& a, const CameraSpec& cam);

/// Angular offsets of `d_body`, or nullopt when the direction falls outside the field of view.
std::optional<ViewAngles> direction_to_view_angles(const Vec3& d_body, const CameraSpec& cam);

/// Angular radius of the Earth disk seen from `altitude`: asin(Re / (Re + h)), degrees.
double horizon_half_angle(double altitude, const OrbitEnv& env);

/// What a camera shows. Geometric fields are empty when no part of the Earth is in view.
struct ViewObservation {
    double t = 0.0;
    bool earth_visible = false;
    bool full_disk_visible = false;
    std::optional<ViewAngles> disk_center_offset;  // direction of the Earth centre
    std::optional<double> disk_angular_radius;     // deg
    std::optional<double> horizon_arc_tilt;        // deg, image-plane angle of nadir from image-down
    std::optional<double> horizon_elevation;       // deg, horizon point nearest the boresight
    std::optional<double> ground_flow_direction;   // deg, from image-up toward image-right
};

ViewObservation observe(const EciState& eci, const AttitudeState& att, const CameraSpec& cam,
                        const OrbitEnv& env);

/// True iff every point of the horizon circle lies inside the camera's field of view.
bool full_disk_visible(const EciState& eci, const AttitudeState& att, const CameraSpec& cam,
                       const OrbitEnv& env);

}  // namespace deorbit
