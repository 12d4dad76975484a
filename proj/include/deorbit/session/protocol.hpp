#pragma once

// Cockpit wire protocol: one JSON object per WebSocket text frame.
//
// client -> server
//   {"kind":"start", "view":"bottom"|"front", "cohort":"pilot"|"civilian", "config":{...}?}
//   {"kind":"stick", "t":s, "x":r, "y":r, "z":r}
//   {"kind":"abort"}
// server -> client
//   {"kind":"telemetry", ...frame fields...}   "err" only when the HUD is enabled
//   {"kind":"result", ...TrialResult...}
//   {"kind":"error", "code":..., "detail":...}
//
// Unknown fields are ignored; unknown kinds are rejected. The optional
// "config" object of a start message overrides TaskConfig fields; the view
// always comes from the top-level "view".

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "deorbit/session/telemetry.hpp"

namespace deorbit::protocol {

namespace code {
inline constexpr std::string_view kBadMessage = "bad_message";
inline constexpr std::string_view kUnknownKind = "unknown_kind";
inline constexpr std::string_view kInvalidConfig = "invalid_config";
inline constexpr std::string_view kNoSession = "no_session";
inline constexpr std::string_view kSessionActive = "session_active";
inline constexpr std::string_view kSessionTerminal = "session_terminal";
inline constexpr std::string_view kInternal = "internal";
}  // namespace code

class ProtocolError : public std::runtime_error {
public:
    ProtocolError(std::string_view code, const std::string& detail)
        : std::runtime_error(detail), code_(code) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct StartMsg {
    TaskConfig config;
    Cohort cohort = Cohort::Pilot;
};

struct StickMsg {
    StickInput stick;
};

struct AbortMsg {};

using ClientMessage = std::variant<StartMsg, StickMsg, AbortMsg>;

/// Parses and validates one client frame. Start configs are validated here,
/// so a successful parse of a start message always yields a runnable config.
ClientMessage parse_client_message(std::string_view text, const TaskConfig& defaults = {});

Json telemetry_message(const TelemetryFrame& f, bool hud_attitude_visible);
Json result_message(const TrialResult& r);
Json error_message(std::string_view code, std::string_view detail);

}  // namespace deorbit::protocol
