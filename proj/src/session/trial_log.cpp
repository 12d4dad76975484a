#include "deorbit/session/trial_log.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "deorbit/errors.hpp"

namespace deorbit {

namespace {

constexpr const char* kFormat = "deorbit-log/1";

Json hashed_part(const LogHeader& h) {
    return {{"config", to_json(h.config)}, {"env", to_json(h.env)}, {"dt", h.dt}, {"telemetry_hz", h.telemetry_hz}};
}

Json input_json(std::uint64_t tick, const StickInput& s) {
    return {{"kind", "input"}, {"tick", tick}, {"x", s.x}, {"y", s.y}, {"z", s.z}};
}

EndReason end_reason_for(TrialPhase p) {
    return p == TrialPhase::Succeeded ? EndReason::Succeeded : EndReason::TimedOut;
}

LogHeader parse_header(const Json& j, std::size_t line) {
    try {
        if (j.value("kind", "") != "header") throw IntegrityError(line, "first line is not a header");
        if (j.value("format", "") != kFormat) throw IntegrityError(line, "unsupported log format");
        LogHeader h;
        h.session = j.at("session").get<std::string>();
        h.cohort = parse_cohort(j.at("cohort").get<std::string>());
        h.config = task_config_from_json(j.at("config"));
        h.env = orbit_env_from_json(j.at("env"));
        h.dt = j.at("dt").get<double>();
        h.telemetry_hz = j.at("telemetry_hz").get<double>();
        if (auto it = j.find("seed"); it != j.end() && !it->is_null()) h.seed = it->get<std::uint64_t>();
        if (h.config_hash() != j.at("config_hash").get<std::string>()) {
            throw IntegrityError(line, "config hash mismatch");
        }
        if (!(h.dt > 0.0) || !(h.telemetry_hz > 0.0)) throw IntegrityError(line, "invalid tick period");
        return h;
    } catch (const Json::exception& e) {
        throw IntegrityError(line, std::string("malformed header: ") + e.what());
    } catch (const ValidationError& e) {
        throw IntegrityError(line, std::string("invalid header: ") + e.what());
    }
}

}  // namespace

Json LogHeader::to_json() const {
    Json j = hashed_part(*this);
    j["kind"] = "header";
    j["format"] = kFormat;
    j["session"] = session;
    j["cohort"] = std::string(deorbit::to_string(cohort));
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    j["config_hash"] = config_hash();
    return j;
}

std::string LogHeader::config_hash() const { return content_hash(hashed_part(*this).dump()); }

std::string_view to_string(EndReason r) {
    switch (r) {
        case EndReason::Succeeded: return "succeeded";
        case EndReason::TimedOut: return "timed_out";
        case EndReason::Aborted: return "aborted";
    }
    return "aborted";
}

std::string frame_line(const TelemetryFrame& f) {
    Json j = frame_fields(f, true);
    j["kind"] = "frame";
    return j.dump();
}

TrialRecorder::TrialRecorder(std::ostream& out, LogHeader header)
    : out_(out), header_(std::move(header)), clock_(header_.dt, header_.telemetry_hz) {}

void TrialRecorder::write(const Json& j) { out_ << j.dump() << '\n'; }

TelemetryFrame TrialRecorder::begin(const TrialState& initial, const ViewObservation& obs) {
    write(header_.to_json());
    TelemetryFrame f = make_frame(initial, obs);
    clock_.due(initial.tick, initial.phase != TrialPhase::Running);
    out_ << frame_line(f) << '\n';
    return f;
}

std::optional<TelemetryFrame> TrialRecorder::record_tick(const StickInput& applied, const TrialState& state,
                                                         const ViewObservation& obs) {
    write(input_json(state.tick - 1, applied));
    if (!clock_.due(state.tick, state.phase != TrialPhase::Running)) return std::nullopt;
    TelemetryFrame f = make_frame(state, obs);
    out_ << frame_line(f) << '\n';
    return f;
}

void TrialRecorder::end(EndReason reason, const TrialState& state) {
    write({{"kind", "end"}, {"reason", std::string(to_string(reason))}, {"tick", state.tick}});
    out_.flush();
}

ReplayOutcome replay(std::istream& in) {
    std::string line;
    std::size_t index = 0;
    if (!std::getline(in, line)) throw IntegrityError(0, "empty log");

    Json head;
    try {
        head = Json::parse(line);
    } catch (const Json::exception&) {
        throw IntegrityError(0, "header is not valid JSON");
    }
    ReplayOutcome out;
    out.header = parse_header(head, 0);
    const LogHeader& h = out.header;

    TrialState state;
    try {
        state = init_trial(h.config, h.env);
    } catch (const ValidationError& e) {
        throw IntegrityError(0, std::string("invalid config: ") + e.what());
    }
    TelemetryClock clock(h.dt, h.telemetry_hz);
    clock.due(0, state.phase != TrialPhase::Running);
    std::optional<std::string> pending =
        frame_line(make_frame(state, trial_observation(state, h.config, h.env)));
    bool ended = false;

    while (std::getline(in, line)) {
        ++index;
        if (line.empty()) continue;
        if (ended) throw IntegrityError(index, "record after end of trial");

        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::exception&) {
            throw IntegrityError(index, "line is not valid JSON");
        }
        const std::string kind = j.is_object() ? j.value("kind", "") : "";

        if (kind == "frame") {
            if (!pending) throw IntegrityError(index, "unexpected frame");
            if (line != *pending) throw IntegrityError(index, "frame does not match re-simulation");
            pending.reset();
            ++out.frames;
        } else if (kind == "input") {
            if (pending) throw IntegrityError(index, "missing frame before input");
            if (state.phase != TrialPhase::Running) throw IntegrityError(index, "input after terminal phase");
            StickInput s;
            try {
                if (j.at("tick").get<std::uint64_t>() != state.tick) throw IntegrityError(index, "tick out of sequence");
                s = {j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>(), 0.0};
            } catch (const Json::exception&) {
                throw IntegrityError(index, "malformed input record");
            }
            state = step_trial(state, s, h.config, h.env, h.dt);
            if (clock.due(state.tick, state.phase != TrialPhase::Running)) {
                pending = frame_line(make_frame(state, trial_observation(state, h.config, h.env)));
            }
        } else if (kind == "end") {
            if (pending) throw IntegrityError(index, "missing frame before end");
            std::string reason;
            std::uint64_t tick = 0;
            try {
                reason = j.at("reason").get<std::string>();
                tick = j.at("tick").get<std::uint64_t>();
            } catch (const Json::exception&) {
                throw IntegrityError(index, "malformed end record");
            }
            if (tick != state.tick) throw IntegrityError(index, "end tick does not match inputs");
            if (reason == "aborted") {
                if (state.phase != TrialPhase::Running) throw IntegrityError(index, "abort after terminal phase");
                out.reason = EndReason::Aborted;
            } else {
                if (state.phase == TrialPhase::Running) throw IntegrityError(index, "trial still running at end");
                out.reason = end_reason_for(state.phase);
                if (reason != to_string(out.reason)) throw IntegrityError(index, "end reason does not match outcome");
            }
            ended = true;
        } else {
            throw IntegrityError(index, "unknown record kind '" + kind + "'");
        }
    }
    if (!ended) throw IntegrityError(index + 1, "truncated log (no end record)");

    out.ticks = state.tick;
    out.result = make_result(state, h.config, h.cohort, h.log_name());
    return out;
}

ReplayOutcome replay_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open log " + path.string());
    return replay(in);
}

}  // namespace deorbit
