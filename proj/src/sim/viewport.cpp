#include "deorbit/viewport.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

#include "deorbit/errors.hpp"

namespace deorbit {

namespace {

// Components of an inertial or body vector along the camera's (right, up, boresight) axes.
struct CamVec {
    double r, u, b;
};

struct CameraAxes {
    Vec3 right, up, bore;

    CamVec project(const Vec3& v) const { return {dot(v, right), dot(v, up), dot(v, bore)}; }
};

CameraAxes inertial_axes(const AttitudeState& att, const CameraSpec& cam) {
    const Mat3 body_to_eci = to_matrix(att.q);
    return {body_to_eci * cam.right(), body_to_eci * cam.up, body_to_eci * cam.boresight};
}

ViewAngles angles_of(const CamVec& c) {
    const double horiz = std::hypot(c.r, c.b);
    return {std::atan2(c.r, c.b) * kRadToDeg, std::atan2(c.u, horiz) * kRadToDeg};
}

bool inside(const ViewAngles& a, double half_h, double half_v) {
    return std::abs(a.az) <= half_h && std::abs(a.el) <= half_v;
}

// Largest cosine between `n` and any point of the field-of-view boundary. The
// vertical edges are great-circle arcs through the up axis; the horizontal
// edges are small circles of constant elevation.
double max_cos_to_boundary(const CamVec& n, double half_h_rad, double half_v_rad) {
    double best = -1.0;
    auto consider = [&](double c) { best = std::max(best, c); };

    for (double side : {-1.0, 1.0}) {
        const double a = side * half_h_rad;
        // Edge az = a: d(el) = cos(el) w + sin(el) u with w = (sin a, 0, cos a).
        const double nw = n.r * std::sin(a) + n.b * std::cos(a);
        auto arc = [&](double el) { return std::cos(el) * nw + std::sin(el) * n.u; };
        const double el_star = std::atan2(n.u, nw);
        if (std::abs(el_star) <= half_v_rad) consider(arc(el_star));
        consider(arc(half_v_rad));
        consider(arc(-half_v_rad));

        const double e = side * half_v_rad;
        // Edge el = e: d(az) = cos(e) (sin az, 0, cos az) + sin(e) u.
        auto ring = [&](double az) {
            return std::cos(e) * (n.r * std::sin(az) + n.b * std::cos(az)) + std::sin(e) * n.u;
        };
        const double az_star = std::atan2(n.r, n.b);
        if (std::abs(az_star) <= half_h_rad) consider(ring(az_star));
        consider(ring(half_h_rad));
        consider(ring(-half_h_rad));
    }
    return best;
}

bool disk_inside(const CamVec& n, double rho_rad, double half_h_rad, double half_v_rad) {
    // Lune |az| <= A is the intersection of two hemispheres with inward normals
    // (-cos A, 0, sin A) and (cos A, 0, sin A); the elevation band excludes two
    // caps of radius 90 - E around +/-up.
    const double s_rho = std::sin(rho_rad);
    const double ca = std::cos(half_h_rad), sa = std::sin(half_h_rad);
    if (-ca * n.r + sa * n.b < s_rho) return false;
    if (ca * n.r + sa * n.b < s_rho) return false;
    if (half_v_rad < rho_rad) return false;
    return std::abs(n.u) <= std::sin(half_v_rad - rho_rad);
}

struct HorizonGeometry {
    Vec3 nadir;  // unit, ECI
    double rho_rad;
};

HorizonGeometry horizon_geometry(const EciState& eci, const OrbitEnv& env) {
    const double r = norm(eci.position);
    if (!(r > env.earth_radius)) throw DomainError("observe: spacecraft is not above the surface");
    return {eci.position * (-1.0 / r), std::asin(env.earth_radius / r)};
}

// Horizon point nearest the boresight, as a unit direction from the spacecraft (ECI).
Vec3 nearest_horizon_direction(const HorizonGeometry& g, const CameraAxes& ax) {
    Vec3 t = ax.bore - dot(ax.bore, g.nadir) * g.nadir;
    double tn = norm(t);
    if (tn < 1e-12) {
        // Boresight on the nadir line: every horizon point is equally near.
        t = ax.up - dot(ax.up, g.nadir) * g.nadir;
        tn = norm(t);
    }
    return std::cos(g.rho_rad) * g.nadir + std::sin(g.rho_rad) * (t / tn);
}

double ground_flow_deg(const EciState& eci, const HorizonGeometry& g, const CameraAxes& ax,
                       const OrbitEnv& env) {
    const Vec3& r = eci.position;
    const double rb = dot(r, ax.bore);
    const double disc = rb * rb - (dot(r, r) - env.earth_radius * env.earth_radius);
    Vec3 surface;
    if (disc >= 0.0 && -rb - std::sqrt(disc) > 0.0) {
        surface = r + ax.bore * (-rb - std::sqrt(disc));
    } else {
        const double tangent = std::sqrt(dot(r, r) - env.earth_radius * env.earth_radius);
        surface = r + nearest_horizon_direction(g, ax) * tangent;
    }

    const Vec3 surface_velocity = cross(Vec3{0.0, 0.0, env.earth_spin_rate}, surface);
    const Vec3 rel = surface_velocity - eci.velocity;
    const Vec3 los = surface - r;
    const double range = norm(los);
    const Vec3 d = los / range;
    const Vec3 d_dot = (rel - dot(rel, d) * d) / range;
    const double fr = dot(d_dot, ax.right), fu = dot(d_dot, ax.up);
    if (fr == 0.0 && fu == 0.0) return 0.0;
    return std::atan2(fr, fu) * kRadToDeg;
}

}  // namespace

std::string_view to_string(CameraId id) { return id == CameraId::Bottom ? "bottom" : "front"; }

CameraId parse_camera_id(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "bottom") return CameraId::Bottom;
    if (lower == "front") return CameraId::Front;
    throw ValidationError("unknown view '" + std::string(s) + "' (expected bottom or front)");
}

void CameraSpec::validate() const {
    if (!(fov_h > 0.0 && fov_h <= 180.0 && fov_v > 0.0 && fov_v <= 180.0)) {
        throw ValidationError("camera field of view must be in (0, 180] degrees");
    }
    if (std::abs(norm(boresight) - 1.0) > 1e-9 || std::abs(norm(up) - 1.0) > 1e-9) {
        throw ValidationError("camera boresight and up must be unit vectors");
    }
    if (std::abs(dot(boresight, up)) > 1e-9) throw ValidationError("camera up must be perpendicular to boresight");
}

CameraSpec CameraSpec::bottom() { return {CameraId::Bottom, {0, 0, 1}, {0, 1, 0}, 145.0, 145.0}; }

CameraSpec CameraSpec::front() { return {CameraId::Front, {1, 0, 0}, {0, 0, -1}, 70.0, 70.0}; }

ViewAngles view_angles(const Vec3& d, const CameraSpec& cam) {
    return angles_of({dot(d, cam.right()), dot(d, cam.up), dot(d, cam.boresight)});
}

bool inside_fov(const ViewAngles& a, const CameraSpec& cam) {
    return inside(a, 0.5 * cam.fov_h, 0.5 * cam.fov_v);
}

std::optional<ViewAngles> direction_to_view_angles(const Vec3& d, const CameraSpec& cam) {
    const ViewAngles a = view_angles(d, cam);
    if (!inside_fov(a, cam)) return std::nullopt;
    return a;
}

double horizon_half_angle(double altitude, const OrbitEnv& env) {
    if (!(altitude > 0.0)) throw DomainError("horizon_half_angle: altitude must be positive");
    return std::asin(env.earth_radius / (env.earth_radius + altitude)) * kRadToDeg;
}

ViewObservation observe(const EciState& eci, const AttitudeState& att, const CameraSpec& cam,
                        const OrbitEnv& env) {
    const HorizonGeometry g = horizon_geometry(eci, env);
    const CameraAxes ax = inertial_axes(att, cam);
    const CamVec n = ax.project(g.nadir);
    const double half_h = 0.5 * cam.fov_h * kDegToRad;
    const double half_v = 0.5 * cam.fov_v * kDegToRad;

    ViewObservation obs;
    obs.t = eci.t;
    const ViewAngles center = angles_of(n);
    obs.earth_visible = inside(center, 0.5 * cam.fov_h, 0.5 * cam.fov_v) ||
                        max_cos_to_boundary(n, half_h, half_v) >= std::cos(g.rho_rad);
    if (!obs.earth_visible) return obs;

    obs.full_disk_visible = disk_inside(n, g.rho_rad, half_h, half_v);
    obs.disk_center_offset = center;
    obs.disk_angular_radius = g.rho_rad * kRadToDeg;
    obs.horizon_arc_tilt = std::atan2(n.r, -n.u) * kRadToDeg;
    const Vec3 h = nearest_horizon_direction(g, ax);
    obs.horizon_elevation = std::asin(std::clamp(dot(h, ax.up), -1.0, 1.0)) * kRadToDeg;
    obs.ground_flow_direction = ground_flow_deg(eci, g, ax, env);
    return obs;
}

bool full_disk_visible(const EciState& eci, const AttitudeState& att, const CameraSpec& cam,
                       const OrbitEnv& env) {
    const HorizonGeometry g = horizon_geometry(eci, env);
    const CamVec n = inertial_axes(att, cam).project(g.nadir);
    return disk_inside(n, g.rho_rad, 0.5 * cam.fov_h * kDegToRad, 0.5 * cam.fov_v * kDegToRad);
}

}  // namespace deorbit
