#include "deorbit/session/session.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <random>

#include "deorbit/errors.hpp"

namespace deorbit {

std::string make_session_id() {
    static std::atomic<std::uint64_t> counter{0};
    static const std::uint32_t salt = std::random_device{}();
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d%02d%02dT%02d%02d%02dZ-%llu-%08x", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                  static_cast<unsigned long long>(counter.fetch_add(1) + 1), salt);
    return buf;
}

Session::Session(std::string id, const TaskConfig& cfg, Cohort cohort, const SessionOptions& opt)
    : id_(std::move(id)), cfg_(cfg), cohort_(cohort), opt_(opt) {
    cfg_.validate();
    log_.open(log_path(), std::ios::out | std::ios::trunc);
    if (!log_) throw DataError("cannot create log " + log_path().string());

    LogHeader h;
    h.session = id_;
    h.cohort = cohort_;
    h.config = cfg_;
    h.env = opt_.env;
    h.dt = opt_.dt;
    h.telemetry_hz = opt_.telemetry_hz;
    recorder_ = std::make_unique<TrialRecorder>(log_, h);

    state_ = init_trial(cfg_, opt_.env);
    const TelemetryFrame f = recorder_->begin(state_, trial_observation(state_, cfg_, opt_.env));
    first_ = protocol::telemetry_message(f, cfg_.hud_attitude_visible);
    log_.flush();
}

Session::~Session() = default;

std::filesystem::path Session::log_path() const { return opt_.data_dir / (id_ + ".jsonl"); }

std::filesystem::path Session::result_path() const { return opt_.data_dir / (id_ + ".result.json"); }

void Session::latch_stick(const StickInput& s) {
    if (terminal()) throw StateError("session " + id_ + " has ended");
    if (fresh_) ++stick_overwrites_;
    latched_ = s;
    fresh_ = true;
    ++stick_writes_;
}

std::vector<Json> Session::tick() {
    std::vector<Json> out;
    if (terminal()) return out;
    fresh_ = false;
    state_ = step_trial(state_, latched_, cfg_, opt_.env, opt_.dt);
    const auto frame = recorder_->record_tick(state_.stick, state_, trial_observation(state_, cfg_, opt_.env));
    if (frame) {
        log_.flush();  // a crashed server still leaves the log readable up to the last frame
        out.push_back(protocol::telemetry_message(*frame, cfg_.hud_attitude_visible));
    }
    if (state_.phase != TrialPhase::Running)
        out.push_back(finish(state_.phase == TrialPhase::Succeeded ? EndReason::Succeeded : EndReason::TimedOut));
    return out;
}

std::vector<Json> Session::abort() {
    if (terminal()) throw StateError("session " + id_ + " has ended");
    return {finish(EndReason::Aborted)};
}

Json Session::finish(EndReason reason) {
    recorder_->end(reason, state_);
    log_.close();
    result_ = make_result(state_, cfg_, cohort_, log_path().filename().string());
    std::ofstream res(result_path(), std::ios::out | std::ios::trunc);
    res << to_json(*result_).dump(2) << '\n';
    if (!res) throw DataError("cannot write " + result_path().string());
    return protocol::result_message(*result_);
}

SessionController::SessionController(SessionOptions opt, TaskConfig defaults)
    : opt_(std::move(opt)), defaults_(defaults) {}

std::vector<Json> SessionController::handle(std::string_view text) {
    using namespace protocol;
    try {
        const ClientMessage msg = parse_client_message(text, defaults_);
        if (const auto* start = std::get_if<StartMsg>(&msg)) {
            if (running()) return {error_message(code::kSessionActive, "a trial is already running")};
            session_ = std::make_unique<Session>(make_session_id(), start->config, start->cohort, opt_);
            ++started_;
            return {session_->first_message()};
        }
        if (!session_) return {error_message(code::kNoSession, "no trial has been started")};
        if (session_->terminal()) return {error_message(code::kSessionTerminal, "the trial has ended")};
        if (const auto* stick = std::get_if<StickMsg>(&msg)) {
            session_->latch_stick(stick->stick);
            ++sticks_;
            return {};
        }
        return session_->abort();
    } catch (const ProtocolError& e) {
        return {error_message(e.code(), e.what())};
    } catch (const std::exception& e) {
        return {error_message(code::kInternal, e.what())};
    }
}

std::vector<Json> SessionController::tick() {
    if (!running()) return {};
    return session_->tick();
}

void SessionController::disconnect() {
    if (running()) session_->abort();
}

}  // namespace deorbit
