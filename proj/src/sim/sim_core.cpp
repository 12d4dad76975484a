#include "deorbit/sim_core.hpp"

#include <cmath>

#include "deorbit/errors.hpp"

namespace deorbit {

void OrbitEnv::validate() const {
    if (!(mu > 0.0)) throw ValidationError("mu must be positive");
    if (!(earth_radius > 0.0)) throw ValidationError("earth_radius must be positive");
    if (!(altitude_nominal > 0.0)) throw ValidationError("altitude_nominal must be positive");
    if (!std::isfinite(earth_spin_rate)) throw ValidationError("earth_spin_rate must be finite");
}

Vec3 gravity_accel(const Vec3& position, const OrbitEnv& env) {
    const double r2 = dot(position, position);
    if (!(r2 > 0.0)) throw DomainError("gravity_accel: zero-length position");
    const double r = std::sqrt(r2);
    return position * (-env.mu / (r2 * r));
}

double circular_speed(const OrbitEnv& env, double altitude) {
    return std::sqrt(env.mu / (env.earth_radius + altitude));
}

double orbital_period(const OrbitEnv& env, double altitude) {
    const double r = env.earth_radius + altitude;
    return 2.0 * kPi * std::sqrt(r * r * r / env.mu);
}

EciState circular_init(const OrbitEnv& env, double altitude) {
    if (!(altitude > 0.0)) throw DomainError("circular_init: altitude must be positive");
    const double r = env.earth_radius + altitude;
    return {{r, 0.0, 0.0}, {0.0, circular_speed(env, altitude), 0.0}, 0.0};
}

double specific_energy(const EciState& s, const OrbitEnv& env) {
    return 0.5 * dot(s.velocity, s.velocity) - env.mu / norm(s.position);
}

double specific_angular_momentum(const EciState& s) { return norm(cross(s.position, s.velocity)); }

EciState rk4_step(const EciState& s, const OrbitEnv& env, double dt) {
    if (!(dt > 0.0)) throw DomainError("rk4_step: dt must be positive");

    const Vec3 k1r = s.velocity;
    const Vec3 k1v = gravity_accel(s.position, env);
    const Vec3 k2r = s.velocity + k1v * (0.5 * dt);
    const Vec3 k2v = gravity_accel(s.position + k1r * (0.5 * dt), env);
    const Vec3 k3r = s.velocity + k2v * (0.5 * dt);
    const Vec3 k3v = gravity_accel(s.position + k2r * (0.5 * dt), env);
    const Vec3 k4r = s.velocity + k3v * dt;
    const Vec3 k4v = gravity_accel(s.position + k3r * dt, env);

    const double w = dt / 6.0;
    EciState out;
    out.position = s.position + (k1r + 2.0 * k2r + 2.0 * k3r + k4r) * w;
    out.velocity = s.velocity + (k1v + 2.0 * k2v + 2.0 * k3v + k4v) * w;
    out.t = s.t + dt;
    return out;
}

AttitudeState integrate_attitude(const AttitudeState& att, double dt) {
    if (!(dt > 0.0)) throw DomainError("integrate_attitude: dt must be positive");
    const Vec3 w = att.omega * kDegToRad;
    const double rate = norm(w);
    if (rate == 0.0) return att;

    // Body-frame rates: q' = q * exp(w dt / 2).
    const Quat dq = axis_angle(w / rate, rate * dt);
    return {normalized(att.q * dq), att.omega};
}

Mat3 lvlh_frame(const EciState& s) {
    const Vec3 h = cross(s.position, s.velocity);
    const double hn = norm(h);
    const double scale = norm(s.position) * norm(s.velocity);
    if (!(scale > 0.0) || hn <= 1e-12 * scale) {
        throw DomainError("lvlh_frame: position and velocity are parallel or zero");
    }
    const Vec3 z = -normalized(s.position);
    const Vec3 y = -(h / hn);
    const Vec3 x = cross(y, z);
    return Mat3::from_columns(x, y, z);
}

Quat deorbit_reference(const EciState& s) {
    // Exactly retrograde for circular orbits; otherwise the local-horizontal
    // projection of -v so that the frame stays orthonormal with +Z on nadir.
    const Mat3 l = lvlh_frame(s);
    return from_matrix(Mat3::from_columns(-l.column(0), -l.column(1), l.column(2)));
}

EulerError attitude_error(const Quat& q, const Quat& q_ref) {
    const Mat3 m = to_matrix(conjugate(q_ref) * q);
    const double cos_pitch = std::hypot(m(0, 0), m(1, 0));
    EulerError e;
    e.pitch = std::atan2(-m(2, 0), cos_pitch) * kRadToDeg;
    if (cos_pitch < 1e-10) {
        e.roll = 0.0;
        e.yaw = std::atan2(-m(0, 1), m(1, 1)) * kRadToDeg;
    } else {
        e.yaw = std::atan2(m(1, 0), m(0, 0)) * kRadToDeg;
        e.roll = std::atan2(m(2, 1), m(2, 2)) * kRadToDeg;
    }
    if (e.yaw == -180.0) e.yaw = 180.0;
    if (e.roll == -180.0) e.roll = 180.0;
    // Adding +0 turns a negative zero into +0.
    e.yaw += 0.0;
    e.pitch += 0.0;
    e.roll += 0.0;
    return e;
}

Quat euler_to_quat(const EulerError& e) {
    const Quat qz = axis_angle({0, 0, 1}, e.yaw * kDegToRad);
    const Quat qy = axis_angle({0, 1, 0}, e.pitch * kDegToRad);
    const Quat qx = axis_angle({1, 0, 0}, e.roll * kDegToRad);
    return qz * qy * qx;
}

}  // namespace deorbit
