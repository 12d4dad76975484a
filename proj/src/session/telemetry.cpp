#include "deorbit/session/telemetry.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "deorbit/errors.hpp"

namespace deorbit {

namespace {

Json vec_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

template <typename T>
void read_field(const Json& j, const char* key, T& out) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return;
    try {
        out = it->get<T>();
    } catch (const Json::exception&) {
        throw ValidationError(std::string("field '") + key + "' has the wrong type");
    }
}

}  // namespace

TelemetryFrame make_frame(const TrialState& s, const ViewObservation& obs) {
    TelemetryFrame f;
    f.tick = s.tick;
    f.t = s.elapsed;
    f.position = s.eci.position;
    f.velocity = s.eci.velocity;
    f.q = s.att.q;
    f.omega = s.att.omega;
    f.stick = s.stick;
    f.fuel = s.fuel.consumed();
    f.err = s.err;
    f.obs = obs;
    f.phase = s.phase;
    return f;
}

Json to_json(const ViewObservation& o) {
    Json j;
    j["t"] = o.t;
    j["earth_visible"] = o.earth_visible;
    j["full_disk_visible"] = o.full_disk_visible;
    j["disk_center_offset"] =
        o.disk_center_offset ? Json{{"az", o.disk_center_offset->az}, {"el", o.disk_center_offset->el}}
                             : Json(nullptr);
    j["disk_angular_radius"] = opt_json(o.disk_angular_radius);
    j["horizon_arc_tilt"] = opt_json(o.horizon_arc_tilt);
    j["horizon_elevation"] = opt_json(o.horizon_elevation);
    j["ground_flow_direction"] = opt_json(o.ground_flow_direction);
    return j;
}

Json frame_fields(const TelemetryFrame& f, bool include_err) {
    Json j;
    j["tick"] = f.tick;
    j["t"] = f.t;
    j["position"] = vec_json(f.position);
    j["velocity"] = vec_json(f.velocity);
    j["q"] = Json::array({f.q.w, f.q.x, f.q.y, f.q.z});
    j["omega"] = vec_json(f.omega);
    j["stick"] = Json::array({f.stick.x, f.stick.y, f.stick.z});
    j["fuel"] = f.fuel;
    if (include_err) j["err"] = {{"yaw", f.err.yaw}, {"pitch", f.err.pitch}, {"roll", f.err.roll}};
    j["obs"] = to_json(f.obs);
    j["phase"] = std::string(to_string(f.phase));
    return j;
}

bool TelemetryClock::due(std::uint64_t tick, bool terminal) {
    const double slot = static_cast<double>(tick) * dt_ * rate_hz_ + 1e-9;
    if (slot >= static_cast<double>(emitted_)) {
        emitted_ = static_cast<std::uint64_t>(std::floor(slot)) + 1;
        return true;
    }
    return terminal;
}

Json to_json(const OrbitEnv& e) {
    return {{"mu", e.mu},
            {"earth_radius", e.earth_radius},
            {"earth_spin_rate", e.earth_spin_rate},
            {"altitude_nominal", e.altitude_nominal}};
}

Json to_json(const ControlConfig& c) {
    return {{"max_rate", c.max_rate}, {"deadband", c.deadband},   {"tau", c.tau},
            {"alpha_max", c.alpha_max}, {"fuel_gain", c.fuel_gain}, {"axis_map", c.axis_map}};
}

Json to_json(const TaskConfig& c) {
    return {{"initial_offset", {{"yaw", c.initial_offset.yaw}, {"pitch", c.initial_offset.pitch},
                                {"roll", c.initial_offset.roll}}},
            {"tolerance", {{"pitch", c.tolerance.pitch}, {"roll", c.tolerance.roll}, {"yaw", c.tolerance.yaw}}},
            {"hold_time", c.hold_time},
            {"timeout", c.timeout},
            {"hud_attitude_visible", c.hud_attitude_visible},
            {"view", std::string(to_string(c.view))},
            {"control", to_json(c.control)}};
}

Json to_json(const TrialResult& r) {
    return {{"view", std::string(to_string(r.view))},
            {"cohort", std::string(to_string(r.cohort))},
            {"completion_time", r.completion_time},
            {"fuel", r.fuel},
            {"success", r.success},
            {"input_log_ref", r.input_log_ref}};
}

OrbitEnv orbit_env_from_json(const Json& j, OrbitEnv e) {
    if (!j.is_object()) throw ValidationError("env must be an object");
    read_field(j, "mu", e.mu);
    read_field(j, "earth_radius", e.earth_radius);
    read_field(j, "earth_spin_rate", e.earth_spin_rate);
    read_field(j, "altitude_nominal", e.altitude_nominal);
    return e;
}

ControlConfig control_config_from_json(const Json& j, ControlConfig c) {
    if (!j.is_object()) throw ValidationError("control must be an object");
    read_field(j, "max_rate", c.max_rate);
    read_field(j, "deadband", c.deadband);
    read_field(j, "tau", c.tau);
    read_field(j, "alpha_max", c.alpha_max);
    read_field(j, "fuel_gain", c.fuel_gain);
    read_field(j, "axis_map", c.axis_map);
    return c;
}

TaskConfig task_config_from_json(const Json& j, TaskConfig c) {
    if (!j.is_object()) throw ValidationError("config must be an object");
    if (auto it = j.find("initial_offset"); it != j.end() && it->is_object()) {
        read_field(*it, "yaw", c.initial_offset.yaw);
        read_field(*it, "pitch", c.initial_offset.pitch);
        read_field(*it, "roll", c.initial_offset.roll);
    }
    if (auto it = j.find("tolerance"); it != j.end() && it->is_object()) {
        read_field(*it, "pitch", c.tolerance.pitch);
        read_field(*it, "roll", c.tolerance.roll);
        read_field(*it, "yaw", c.tolerance.yaw);
    }
    read_field(j, "hold_time", c.hold_time);
    read_field(j, "timeout", c.timeout);
    read_field(j, "hud_attitude_visible", c.hud_attitude_visible);
    if (auto it = j.find("view"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw ValidationError("field 'view' has the wrong type");
        c.view = parse_camera_id(it->get<std::string>());
    }
    if (auto it = j.find("control"); it != j.end() && !it->is_null()) {
        c.control = control_config_from_json(*it, c.control);
    }
    return c;
}

TrialResult trial_result_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("result must be an object");
    TrialResult r;
    try {
        r.view = parse_camera_id(j.at("view").get<std::string>());
        r.cohort = parse_cohort(j.at("cohort").get<std::string>());
        r.completion_time = j.at("completion_time").get<double>();
        r.fuel = j.at("fuel").get<double>();
        r.success = j.at("success").get<bool>();
        r.input_log_ref = j.value("input_log_ref", std::string{});
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("malformed result record: ") + e.what());
    }
    return r;
}

std::string content_hash(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace deorbit
