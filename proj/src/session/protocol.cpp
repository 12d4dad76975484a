#include "deorbit/session/protocol.hpp"

#include <cmath>

#include "deorbit/errors.hpp"

namespace deorbit::protocol {

namespace {

double finite_number(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) throw ProtocolError(code::kBadMessage, std::string("'") + key + "' must be a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw ProtocolError(code::kBadMessage, std::string("'") + key + "' must be finite");
    return v;
}

std::string string_field(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw ProtocolError(code::kBadMessage, std::string("'") + key + "' must be a string");
    return it->get<std::string>();
}

}  // namespace

ClientMessage parse_client_message(std::string_view text, const TaskConfig& defaults) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception&) {
        throw ProtocolError(code::kBadMessage, "message is not valid JSON");
    }
    if (!j.is_object()) throw ProtocolError(code::kBadMessage, "message must be an object");
    auto kind_it = j.find("kind");
    if (kind_it == j.end() || !kind_it->is_string()) throw ProtocolError(code::kBadMessage, "missing 'kind'");
    const std::string kind = kind_it->get<std::string>();

    if (kind == "start") {
        StartMsg m;
        try {
            m.config = defaults;
            if (auto c = j.find("config"); c != j.end() && !c->is_null()) {
                if (!c->is_object()) throw ValidationError("'config' must be an object");
                m.config = task_config_from_json(*c, defaults);
            }
            m.config.view = parse_camera_id(string_field(j, "view"));
            m.cohort = parse_cohort(string_field(j, "cohort"));
            m.config.validate();
        } catch (const ValidationError& e) {
            throw ProtocolError(code::kInvalidConfig, e.what());
        }
        return m;
    }
    if (kind == "stick") {
        StickMsg m;
        m.stick.x = finite_number(j, "x");
        m.stick.y = finite_number(j, "y");
        m.stick.z = finite_number(j, "z");
        if (j.contains("t")) m.stick.t = finite_number(j, "t");
        return m;
    }
    if (kind == "abort") return AbortMsg{};
    throw ProtocolError(code::kUnknownKind, "unknown message kind '" + kind + "'");
}

Json telemetry_message(const TelemetryFrame& f, bool hud_attitude_visible) {
    Json j = frame_fields(f, hud_attitude_visible);
    j["kind"] = "telemetry";
    return j;
}

Json result_message(const TrialResult& r) {
    Json j = to_json(r);
    j["kind"] = "result";
    return j;
}

Json error_message(std::string_view c, std::string_view detail) {
    return {{"kind", "error"}, {"code", std::string(c)}, {"detail", std::string(detail)}};
}

}  // namespace deorbit::protocol
