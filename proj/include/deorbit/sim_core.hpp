#pragma once

// Two-body orbit propagation and rigid-body attitude kinematics.
//
// Units: km, km/s, s. Body rates are deg/s about body X (roll), Y (pitch), Z (yaw).

#include "deorbit/vec.hpp"

namespace deorbit {

struct OrbitEnv {
    double mu = 398600.4418;              // km^3/s^2
    double earth_radius = 6371.0;         // km, spherical
    double earth_spin_rate = 7.2921159e-5;  // rad/s about inertial +Z
    double altitude_nominal = 400.0;      // km

    /// Throws ValidationError when a field is non-positive.
    void validate() const;
};

struct EciState {
    Vec3 position;  // km
    Vec3 velocity;  // km/s
    double t = 0.0;  // s
};

struct AttitudeState {
    Quat q;      // rotates ECI into body; columns of to_matrix(q) are body axes in ECI
    Vec3 omega;  // deg/s, body axes
};

/// 3-2-1 intrinsic decomposition (yaw about Z, then pitch about Y, then roll about X), degrees.
struct EulerError {
    double yaw = 0.0;
    double pitch = 0.0;
    double roll = 0.0;
};

Vec3 gravity_accel(const Vec3& position, const OrbitEnv& env);

EciState circular_init(const OrbitEnv& env, double altitude);

double circular_speed(const OrbitEnv& env, double altitude);
double orbital_period(const OrbitEnv& env, double altitude);

/// v^2/2 - mu/r, km^2/s^2.
double specific_energy(const EciState& s, const OrbitEnv& env);

/// |r x v|, km^2/s.
double specific_angular_momentum(const EciState& s);

/// One classical fourth-order Runge-Kutta step of the two-body equations.
EciState rk4_step(const EciState& state, const OrbitEnv& env, double dt);

/// Advances q by the exact rotation of constant body rates over dt. Rates are unchanged.
AttitudeState integrate_attitude(const AttitudeState& att, double dt);

/// Local-vertical local-horizontal frame as a matrix whose columns are its X, Y, Z axes in ECI.
/// Z points to the Earth centre, Y along the negative orbit normal, X completes (prograde).
Mat3 lvlh_frame(const EciState& state);

/// De-orbit reference attitude: body +X retrograde, +Z nadir, +Y completing.
Quat deorbit_reference(const EciState& state);

/// Rotation from the reference frame to the body frame as 3-2-1 angles.
/// At pitch = +/-90 deg roll is reported as 0 and yaw carries the remainder.
EulerError attitude_error(const Quat& q, const Quat& q_ref);

/// Quaternion of the intrinsic rotation yaw(Z) * pitch(Y) * roll(X).
Quat euler_to_quat(const EulerError& e);

}  // namespace deorbit
