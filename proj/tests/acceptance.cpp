// Acceptance gate: one PASS/FAIL line per primary criterion. Exit status is
// the number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "deorbit/analysis/eeg.hpp"
#include "deorbit/analysis/gaze.hpp"
#include "deorbit/analysis/scoring.hpp"
#include "deorbit/analysis/stats.hpp"
#include "deorbit/cli.hpp"
#include "deorbit/headless.hpp"
#include "deorbit/session/session.hpp"
#include "oracles.hpp"

using namespace deorbit;
using namespace deorbit::analysis;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("%s [%2d] %-28s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

PolicyKind own_policy(CameraId v) { return v == CameraId::Bottom ? PolicyKind::Bottom : PolicyKind::Front; }

TrialResult autopilot(CameraId view, const EulerError& offset, std::ostream* log = nullptr) {
    TaskConfig cfg;
    cfg.view = view;
    cfg.initial_offset = offset;
    auto p = make_policy(own_policy(view), policy_context_for(cfg, kInteractiveDt));
    if (!log) return run_headless(cfg, *p, {}, kInteractiveDt);
    LogHeader h;
    h.session = "acceptance";
    h.config = cfg;
    TrialRecorder rec(*log, h);
    return run_headless(cfg, *p, {}, kInteractiveDt, Cohort::Pilot, &rec);
}

void effect_sizes() {
    const double F[] = {7.508, 6.466, 3.650, 2.696};
    const double want[] = {0.429, 0.393, 0.267, 0.212};
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 4; ++i) {
        const double eta = eta_sq_from_F(F[i], 10.0);
        ok = ok && std::fabs(eta - want[i]) <= 0.001;
        detail += fmt("%s%.3f->%.4f", i ? " " : "", F[i], eta);
    }
    report(1, "effect sizes", ok, detail);
}

void orbit_conservation() {
    const OrbitEnv env;
    const auto t0 = Clock::now();
    const EciState s0 = circular_init(env, 400.0);
    const double period = orbital_period(env, 400.0), dt = 0.1;
    EciState s = s0;
    const auto steps = static_cast<long>(std::floor(period / dt));
    for (long i = 0; i < steps; ++i) s = rk4_step(s, env, dt);
    s = rk4_step(s, env, period - steps * dt);
    const double runtime = seconds_since(t0);
    const double de = std::fabs(specific_energy(s, env) - specific_energy(s0, env)) / std::fabs(specific_energy(s0, env));
    const double dh = std::fabs(specific_angular_momentum(s) - specific_angular_momentum(s0)) /
                      specific_angular_momentum(s0);
    const double close = norm(s.position - s0.position);
    report(2, "orbit conservation", de < 1e-9 && dh < 1e-9 && close < 1e-3 && runtime < 5.0,
           fmt("period %.3f s, dE/E %.2e, dh/h %.2e, closure %.2e km, %.3f s", period, de, dh, close, runtime));
}

void horizon_geometry() {
    const OrbitEnv env;
    const double rho = horizon_half_angle(400.0, env);
    const EciState eci = circular_init(env, 400.0);
    const AttitudeState ref{deorbit_reference(eci), {}};
    const Vec3 nadir = to_matrix(ref.q).transposed() * (-normalized(eci.position));
    const bool bottom = full_disk_visible(eci, ref, CameraSpec::bottom(), env);
    const bool front = full_disk_visible(eci, ref, CameraSpec::front(), env);
    const bool bottom_bf = oracle::full_disk_brute(CameraSpec::bottom(), nadir, rho, 3600);
    const bool front_bf = oracle::full_disk_brute(CameraSpec::front(), nadir, rho, 3600);

    std::mt19937_64 rng(42);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int agree = 0;
    for (int i = 0; i < 1000; ++i) {
        const Quat q = i % 2 ? normalized(Quat{n(rng), n(rng), n(rng), n(rng)})
                             : normalized(ref.q * euler_to_quat({u(rng) * 50, u(rng), u(rng)}));
        const AttitudeState att{q, {}};
        const Vec3 nb = to_matrix(q).transposed() * (-normalized(eci.position));
        agree += full_disk_visible(eci, att, CameraSpec::bottom(), env) ==
                 oracle::full_disk_brute(CameraSpec::bottom(), nb, rho, 3600);
    }
    const bool angle_ok = std::fabs(rho - 70.23) <= 0.01;
    report(3, "horizon geometry",
           angle_ok && bottom && !front && bottom == bottom_bf && front == front_bf && agree == 1000,
           fmt("half-angle %.4f deg (target 70.23 +/- 0.01)%s; bottom full disk %s, front %s; brute force agrees "
               "%d/1000",
               rho, angle_ok ? "" : " [asin(6371/6771)]", bottom ? "yes" : "no", front ? "yes" : "no", agree));
}

void control_law() {
    const ControlConfig c;
    Vec3 w{};
    for (int i = 0; i < 500; ++i) w = rate_track_step(w, stick_to_rate({1, 1, 1}, c), c, kInteractiveDt).omega;
    IdlePolicy idle;
    const TrialResult r = run_headless(TaskConfig{}, idle, {}, kInteractiveDt);
    const bool rate_ok = std::fabs(w.x - 3.0) <= 0.01 && std::fabs(w.y - 3.0) <= 0.01 && std::fabs(w.z - 3.0) <= 0.01;
    report(4, "control law", rate_ok && r.fuel == 0.0 && r.completion_time == 600.0,
           fmt("full deflection %.6f deg/s; idle 600 s fuel %.6f", w.x, r.fuel));
}

void task_round_trip() {
    const OrbitEnv env;
    TaskConfig cfg;
    const TrialState s = init_trial(cfg, env);
    cfg.view = CameraId::Bottom;
    const bool eb = trial_observation(s, cfg, env).earth_visible;
    cfg.view = CameraId::Front;
    const bool ef = trial_observation(s, cfg, env).earth_visible;
    const bool exact = s.err.yaw == 104.0 && s.err.pitch == 0.0 && s.err.roll == 102.0;
    report(5, "task round-trip", exact && eb && ef,
           fmt("err (%.17g, %.17g, %.17g); earth visible bottom %s front %s", s.err.yaw, s.err.pitch, s.err.roll,
               eb ? "yes" : "no", ef ? "yes" : "no"));
}

void autopilot_bounds() {
    const auto t0 = Clock::now();
    const TrialResult b0 = autopilot(CameraId::Bottom, seeded_offset(0));
    const TrialResult f0 = autopilot(CameraId::Front, seeded_offset(0));
    std::vector<double> tb, tf;
    int fails = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const TrialResult b = autopilot(CameraId::Bottom, seeded_offset(seed));
        const TrialResult f = autopilot(CameraId::Front, seeded_offset(seed));
        fails += !b.success + !f.success;
        tb.push_back(b.completion_time);
        tf.push_back(f.completion_time);
    }
    const double runtime = seconds_since(t0);
    const double mb = median(tb), mf = median(tf);
    const bool ok = b0.success && f0.success && b0.completion_time < 300.0 && f0.completion_time < 300.0 && mb < mf &&
                    runtime < 120.0;
    report(6, "autopilot bounds", ok,
           fmt("reference offset bottom %.2f s, front %.2f s; 50 seeds median bottom %.2f s < front %.2f s "
               "(%d failed runs); batch %.2f s",
               b0.completion_time, f0.completion_time, mb, mf, fails, runtime));
}

void ivt_equivalence() {
    std::mt19937_64 rng(7);
    int identical = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto s = oracle::random_trace(rng);
        const auto got = detect_fixations(s);
        const auto want = oracle::ivt(s);
        bool same = got.size() == want.size();
        for (std::size_t i = 0; same && i < got.size(); ++i)
            same = got[i].start == want[i].start && got[i].end == want[i].end && got[i].first == want[i].first &&
                   got[i].last == want[i].last && norm(got[i].centroid - want[i].centroid) < 1e-12;
        identical += same;
    }
    const auto g = oracle::golden_trace();
    const auto ev = detect_fixations(g.samples);
    const auto sac = saccade_stats(g.samples, ev);
    const bool golden = ev.size() == 2 && ev[0].start == 0.0 && std::fabs(ev[0].end - g.fix1_end) < 1e-12 &&
                        std::fabs(ev[1].start - g.fix2_start) < 1e-12 && ev[1].end == g.samples.back().t && sac &&
                        sac->intervals == 6 && std::fabs(sac->peak - 200.0) < 1e-9;
    report(7, "I-VT oracle equivalence", identical == 1000 && golden,
           fmt("%d/1000 traces identical; golden %zu fixations, %zu saccade intervals at %.3f deg/s", identical,
               ev.size(), sac ? sac->intervals : 0, sac ? sac->peak : 0.0));
}

void spectral_check() {
    EegChannelRecord rec;
    rec.label = "O1";
    rec.rate = 128.0;
    for (int i = 0; i < 128 * 60; ++i) rec.samples.push_back(std::sin(2.0 * kPi * 10.0 * i / 128.0));
    const BandPowers p = band_powers(rec);
    const double total = p.theta + p.alpha + p.beta + p.gamma;
    const double share = p.alpha / total;
    const BandSpec b;
    const bool bands = b.theta.lo == 4 && b.theta.hi == 8 && b.alpha.lo == 8 && b.alpha.hi == 12 && b.beta.lo == 16 &&
                       b.beta.hi == 25 && b.gamma.lo == 25 && b.gamma.hi == 45;
    report(8, "spectral check", share > 0.95 && bands,
           fmt("alpha share %.6f; bands theta %g-%g alpha %g-%g beta %g-%g gamma %g-%g Hz", share, b.theta.lo,
               b.theta.hi, b.alpha.lo, b.alpha.hi, b.beta.lo, b.beta.hi, b.gamma.lo, b.gamma.hi));
}

void scoring_goldens() {
    SusSheet threes;
    threes.fill(3);
    const SusSheet best{5, 1, 5, 1, 5, 1, 5, 1, 5, 1};
    TlxSheet fifty;
    fifty.fill(50);
    const double a = sus_score(threes), b = sus_score(best), c = tlx_score(fifty);
    report(9, "scoring goldens", a == 50.0 && b == 100.0 && c == 50.0,
           fmt("SUS all-3 %.1f, SUS max %.1f, TLX all-50 %.1f", a, b, c));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void determinism() {
    // Replay: every frame line is regenerated and compared byte for byte.
    int replays = 0, exact = 0;
    for (CameraId v : {CameraId::Bottom, CameraId::Front})
        for (std::uint64_t seed : {0, 7, 19}) {
            std::ostringstream log;
            const TrialResult r = autopilot(v, seeded_offset(seed), &log);
            std::istringstream in(log.str());
            const ReplayOutcome o = replay(in);
            ++replays;
            exact += o.result.completion_time == r.completion_time && o.result.fuel == r.fuel &&
                     o.result.success == r.success;
        }

    // CLI batches: same flags and seed, two output directories.
    const fs::path root = fs::temp_directory_path() / ("deorbit-acceptance-" + make_session_id());
    bool batches = true;
    std::string out[2];
    for (int k = 0; k < 2; ++k) {
        const std::string dir = (root / std::to_string(k)).string();
        const char* argv[] = {"deorbit", "run", "--view", "front", "--n", "3", "--seed", "4", "--out-dir", dir.c_str()};
        std::ostringstream o, e;
        batches = batches && cli::main(10, argv, o, e) == 0;
        out[k] = o.str();
    }
    batches = batches && !out[0].empty() && out[0] == out[1];
    int files = 0;
    for (const auto& e : fs::directory_iterator(root / "0")) {
        batches = batches && slurp(e.path()) == slurp(root / "1" / e.path().filename());
        ++files;
    }
    std::error_code ec;
    fs::remove_all(root, ec);
    report(10, "determinism", exact == replays && batches && files == 6,
           fmt("%d/%d replays bit-exact; CLI batches %s (%d files each)", exact, replays,
               batches ? "byte-identical" : "differ", files));
}

}  // namespace

int main() {
    const std::function<void()> criteria[] = {effect_sizes,    orbit_conservation, horizon_geometry, control_law,
                                              task_round_trip, autopilot_bounds,   ivt_equivalence,  spectral_check,
                                              scoring_goldens, determinism};
    for (const auto& c : criteria) {
        try {
            c();
        } catch (const std::exception& e) {
            std::printf("FAIL      exception: %s\n", e.what());
            ++failures;
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, std::size(criteria));
    return failures;
}
