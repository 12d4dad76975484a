#include "deorbit/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "deorbit/analysis/eeg.hpp"
#include "deorbit/analysis/gaze.hpp"
#include "deorbit/analysis/readers.hpp"
#include "deorbit/analysis/scoring.hpp"
#include "deorbit/analysis/stats.hpp"
#include "deorbit/errors.hpp"
#include "deorbit/headless.hpp"
#include "deorbit/session/server.hpp"

namespace deorbit::cli {

namespace fs = std::filesystem;

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

namespace {

// Builds one JSON object with keys in insertion order and fixed-point numbers.
class Record {
public:
    Record& num(std::string_view k, double v) { return raw(k, fixed6(v)); }
    Record& opt(std::string_view k, const std::optional<double>& v) { return raw(k, v ? fixed6(*v) : "null"); }
    Record& integer(std::string_view k, std::uint64_t v) { return raw(k, std::to_string(v)); }
    Record& boolean(std::string_view k, bool v) { return raw(k, v ? "true" : "false"); }
    Record& str(std::string_view k, std::string_view v) { return raw(k, Json(std::string(v)).dump()); }
    Record& obj(std::string_view k, const Record& r) { return raw(k, r.text()); }
    Record& list(std::string_view k, const std::vector<Record>& rs) {
        std::string s = "[";
        for (std::size_t i = 0; i < rs.size(); ++i) s += (i ? "," : "") + rs[i].text();
        return raw(k, s + "]");
    }
    std::string text() const { return "{" + body_ + "}"; }

private:
    Record& raw(std::string_view k, const std::string& v) {
        if (!body_.empty()) body_ += ",";
        body_ += Json(std::string(k)).dump() + ":" + v;
        return *this;
    }
    std::string body_;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return in;
}

std::string trial_name(CameraId view, Cohort cohort, std::uint64_t seed) {
    return std::string(to_string(view)) + "-" + std::string(to_string(cohort)) + "-seed" + std::to_string(seed);
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
    std::string view;
    std::string policy = "auto";
    std::uint64_t n = 1;
    std::uint64_t seed = 0;
    std::string out_dir = "runs";
    std::string cohort = "pilot";
    double dt = kInteractiveDt;
    bool hud = false;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
    TaskConfig base;
    base.view = parse_camera_id(a.view);
    base.hud_attitude_visible = a.hud;
    const Cohort cohort = parse_cohort(a.cohort);
    const PolicyKind kind = a.policy == "auto" ? (base.view == CameraId::Bottom ? PolicyKind::Bottom : PolicyKind::Front)
                                               : parse_policy_kind(a.policy);
    const OrbitEnv env{};

    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (ec || !fs::is_directory(a.out_dir)) throw DataError("cannot create output directory " + a.out_dir);

    for (std::uint64_t i = 0; i < a.n; ++i) {
        const std::uint64_t seed = a.seed + i;
        TaskConfig cfg = base;
        cfg.initial_offset = seeded_offset(seed);
        cfg.validate();

        LogHeader h;
        h.session = trial_name(cfg.view, cohort, seed);
        h.cohort = cohort;
        h.config = cfg;
        h.env = env;
        h.dt = a.dt;
        h.seed = seed;

        const fs::path log_path = fs::path(a.out_dir) / h.log_name();
        std::ofstream log(log_path, std::ios::out | std::ios::trunc);
        if (!log) throw DataError("cannot write " + log_path.string());
        TrialRecorder rec(log, h);
        auto policy = make_policy(kind, policy_context_for(cfg, a.dt));
        const TrialResult r = run_headless(cfg, *policy, env, a.dt, cohort, &rec);
        log.close();
        if (!log) throw DataError("error writing " + log_path.string());

        const fs::path res_path = fs::path(a.out_dir) / (h.session + ".result.json");
        std::ofstream res(res_path, std::ios::out | std::ios::trunc);
        res << to_json(r).dump(2) << '\n';
        if (!res) throw DataError("cannot write " + res_path.string());

        out << Record()
                   .integer("seed", seed)
                   .str("view", to_string(r.view))
                   .str("cohort", to_string(r.cohort))
                   .str("policy", to_string(kind))
                   .boolean("success", r.success)
                   .num("completion_time", r.completion_time)
                   .num("fuel", r.fuel)
                   .obj("initial_offset", Record()
                                              .num("yaw", cfg.initial_offset.yaw)
                                              .num("pitch", cfg.initial_offset.pitch)
                                              .num("roll", cfg.initial_offset.roll))
                   .str("log", r.input_log_ref)
                   .text()
            << '\n';
    }
    return kExitOk;
}

// ---- serve -----------------------------------------------------------------

struct ServeArgs {
    std::string address = "127.0.0.1";
    unsigned short port = 8080;
    std::string data_dir = "sessions";
    double speed = 1.0;
    std::string static_dir;
};

int cmd_serve(const ServeArgs& a, std::ostream& out) {
    ServerOptions opt;
    opt.address = a.address;
    opt.port = a.port;
    opt.session.data_dir = a.data_dir;
    opt.speed = a.speed;
    if (!a.static_dir.empty()) opt.static_dir = a.static_dir;
    Server server(opt);
    out << "listening on ws://" << a.address << ":" << server.port() << "/ (data dir " << a.data_dir << ")"
        << std::endl;
    server.run();
    return kExitOk;
}

// ---- replay ----------------------------------------------------------------

int cmd_replay(const std::string& path, std::ostream& out) {
    const ReplayOutcome r = replay_file(path);
    Record rec;
    rec.str("session", r.header.session)
        .str("view", to_string(r.result.view))
        .str("cohort", to_string(r.result.cohort))
        .str("reason", to_string(r.reason))
        .boolean("success", r.result.success)
        .num("completion_time", r.result.completion_time)
        .num("fuel", r.result.fuel)
        .integer("ticks", r.ticks)
        .integer("frames", r.frames)
        .boolean("frames_verified", true);

    // A stored result next to the log must agree with the re-simulation.
    fs::path stored = fs::path(path);
    stored.replace_filename(r.header.session + ".result.json");
    if (fs::exists(stored)) {
        std::ifstream in(stored);
        Json j;
        try {
            j = Json::parse(in);
        } catch (const Json::exception&) {
            throw DataError(stored.string() + ": not valid JSON");
        }
        const TrialResult s = trial_result_from_json(j);
        const bool same = s.view == r.result.view && s.cohort == r.result.cohort && s.success == r.result.success &&
                          s.completion_time == r.result.completion_time && s.fuel == r.result.fuel;
        if (!same) throw DataError(stored.string() + ": stored result differs from replay");
        rec.boolean("result_verified", true);
    }
    out << rec.text() << '\n';
    return kExitOk;
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
    std::string kind;
    std::string in;
    double threshold = 30.0;
    double max_gap = 0.1;
    double rate = 0.0;  // 0: infer from timestamps
    double window = 2.0;
    double overlap = 0.5;
};

Record stat_record(const analysis::StatResult& s) {
    return Record()
        .num("F", s.F)
        .num("df_effect", s.df_effect)
        .num("df_error", s.df_error)
        .num("partial_eta_sq", s.partial_eta_sq)
        .num("ss_effect", s.ss_effect)
        .num("ss_error", s.ss_error);
}

Record bands_record(const analysis::BandPowers& p) {
    return Record().num("theta", p.theta).num("alpha", p.alpha).num("beta", p.beta).num("gamma", p.gamma);
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
    using namespace analysis;
    std::ifstream in = open_input(a.in);
    Record rec;
    rec.str("kind", a.kind);

    if (a.kind == "gaze") {
        const auto samples = read_gaze_csv(in, a.in);
        IvtConfig cfg;
        cfg.threshold = a.threshold;
        cfg.max_gap = a.max_gap;
        const auto ev = detect_fixations(samples, cfg);
        std::size_t valid = 0;
        for (const auto& s : samples) valid += s.valid ? 1 : 0;
        const double duration = samples.size() >= 2 ? samples.back().t - samples.front().t : 0.0;
        if (!(duration > 0.0)) throw DataError(a.in + ": need at least two samples spanning positive time");
        const auto m = fixation_metrics(ev, duration);
        const auto sac = saccade_stats(samples, ev, cfg);
        rec.integer("samples", samples.size())
            .integer("valid", valid)
            .num("duration", duration)
            .integer("fixations", ev.size())
            .num("fixation_rate", m.fixation_rate)
            .opt("mean_fixation_duration", m.mean_fixation_duration)
            .opt("saccade_mean_velocity", sac ? std::optional(sac->mean) : std::nullopt)
            .opt("saccade_peak_velocity", sac ? std::optional(sac->peak) : std::nullopt);
    } else if (a.kind == "eeg") {
        const auto ch = read_eeg_csv(in, a.in, a.rate > 0.0 ? std::optional(a.rate) : std::nullopt);
        WelchConfig w;
        w.window = a.window;
        w.overlap = a.overlap;
        const auto s = summarize_eeg(ch, {}, w);
        std::vector<Record> rows;
        for (const auto& [label, p] : s.channels) rows.push_back(bands_record(p).str("label", label));
        rec.num("rate", ch.front().rate)
            .integer("samples", ch.front().samples.size())
            .list("channels", rows)
            .obj("mean", bands_record(s.mean))
            .num("engagement_index", s.engagement)
            .opt("task_load_index", s.task_load);
    } else if (a.kind == "tlx" || a.kind == "sus") {
        std::vector<Record> rows;
        double total = 0.0;
        auto emit = [&](const std::string& subject, double score) {
            rows.push_back(Record().str("subject", subject).num("score", score));
            total += score;
        };
        if (a.kind == "tlx") {
            for (const auto& r : read_tlx_csv(in, a.in)) emit(r.subject, tlx_score(r.sheet));
        } else {
            for (const auto& r : read_sus_csv(in, a.in)) emit(r.subject, sus_score(r.sheet));
        }
        rec.list("sheets", rows).num("mean", total / static_cast<double>(rows.size()));
    } else if (a.kind == "anova") {
        const auto d = read_mixed_csv(in, a.in);
        const auto r = anova_mixed_2x2(d);
        rec.integer("n_per_group", r.n_per_group)
            .obj("within", stat_record(r.within))
            .obj("between", stat_record(r.between))
            .obj("interaction", stat_record(r.interaction));
    }
    out << rec.text() << '\n';
    return kExitOk;
}

// ---- compare ---------------------------------------------------------------

struct Cell {
    std::vector<double> times, fuel;
    std::size_t discarded = 0;

    double mean_time() const { return mean(times); }
    double median_time() const {
        std::vector<double> v = times;
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }
    double mean_fuel() const { return mean(fuel); }
    static double mean(const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    }
};

int cmd_compare(const std::string& dir, std::ostream& out) {
    if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (e.is_regular_file() && name.size() > 12 && name.ends_with(".result.json")) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    std::map<std::pair<int, int>, Cell> cells;
    for (const auto& f : files) {
        std::ifstream in(f);
        Json j;
        try {
            j = Json::parse(in);
        } catch (const Json::exception&) {
            throw DataError(f.string() + ": not valid JSON");
        }
        TrialResult r;
        try {
            r = trial_result_from_json(j);
        } catch (const ValidationError& e) {
            throw DataError(f.string() + ": " + e.what());
        }
        Cell& c = cells[{static_cast<int>(r.view), static_cast<int>(r.cohort)}];
        if (!r.success) {
            ++c.discarded;  // failed runs do not enter the comparison
            continue;
        }
        c.times.push_back(r.completion_time);
        c.fuel.push_back(r.fuel);
    }

    const CameraId views[] = {CameraId::Bottom, CameraId::Front};
    const Cohort cohorts[] = {Cohort::Pilot, Cohort::Civilian};
    std::string missing;
    for (CameraId v : views)
        for (Cohort c : cohorts)
            if (cells[{static_cast<int>(v), static_cast<int>(c)}].times.empty())
                missing += (missing.empty() ? "" : ", ") + std::string(to_string(v)) + "/" + std::string(to_string(c));
    if (!missing.empty()) throw DataError("no successful results for " + missing + " in " + dir);

    std::ostringstream table;
    table << std::left << std::setw(8) << "view" << std::setw(10) << "cohort" << std::right << std::setw(4) << "n"
          << std::setw(10) << "discarded" << std::setw(16) << "mean_time_s" << std::setw(16) << "median_time_s"
          << std::setw(14) << "mean_fuel" << '\n';
    std::vector<Record> rows, deltas;
    for (CameraId v : views)
        for (Cohort c : cohorts) {
            const Cell& cell = cells[{static_cast<int>(v), static_cast<int>(c)}];
            table << std::left << std::setw(8) << to_string(v) << std::setw(10) << to_string(c) << std::right
                  << std::setw(4) << cell.times.size() << std::setw(10) << cell.discarded << std::setw(16)
                  << fixed6(cell.mean_time()) << std::setw(16) << fixed6(cell.median_time()) << std::setw(14)
                  << fixed6(cell.mean_fuel()) << '\n';
            rows.push_back(Record()
                               .str("view", to_string(v))
                               .str("cohort", to_string(c))
                               .integer("n", cell.times.size())
                               .integer("discarded", cell.discarded)
                               .num("mean_completion_time", cell.mean_time())
                               .num("median_completion_time", cell.median_time())
                               .num("mean_fuel", cell.mean_fuel()));
        }
    table << "\nfront - bottom\n";
    for (Cohort c : cohorts) {
        const Cell& b = cells[{static_cast<int>(CameraId::Bottom), static_cast<int>(c)}];
        const Cell& f = cells[{static_cast<int>(CameraId::Front), static_cast<int>(c)}];
        const double dm = f.mean_time() - b.mean_time(), dmed = f.median_time() - b.median_time(),
                     df = f.mean_fuel() - b.mean_fuel();
        table << std::left << std::setw(8) << "" << std::setw(10) << to_string(c) << std::right << std::setw(4) << ""
              << std::setw(10) << "" << std::setw(16) << fixed6(dm) << std::setw(16) << fixed6(dmed) << std::setw(14)
              << fixed6(df) << '\n';
        deltas.push_back(Record()
                             .str("cohort", to_string(c))
                             .num("mean_completion_time", dm)
                             .num("median_completion_time", dmed)
                             .num("mean_fuel", df));
    }
    out << table.str() << '\n' << Record().list("cells", rows).list("deltas_front_minus_bottom", deltas).text() << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"De-orbit attitude simulator and human-factors analysis"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    const std::vector<std::string> views{"bottom", "front"};
    const std::vector<std::string> cohorts{"pilot", "civilian"};

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run seeded headless trials with an autopilot");
    run_cmd->add_option("--view", run.view, "Camera view")->required()->check(CLI::IsMember(views, CLI::ignore_case));
    run_cmd->add_option("--policy", run.policy, "Autopilot (auto follows the view)")
        ->check(CLI::IsMember({"auto", "bottom", "front", "idle"}, CLI::ignore_case));
    run_cmd->add_option("--n", run.n, "Number of trials")->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", run.seed, "First seed (seed 0 is the reference offset)");
    run_cmd->add_option("--out-dir", run.out_dir, "Directory for logs and results");
    run_cmd->add_option("--cohort", run.cohort, "Cohort label")->check(CLI::IsMember(cohorts, CLI::ignore_case));
    run_cmd->add_option("--dt", run.dt, "Simulation tick (s)")->check(CLI::PositiveNumber);
    run_cmd->add_flag("--hud", run.hud, "Mark trials as HUD-visible");

    ServeArgs serve;
    auto* serve_cmd = app.add_subcommand("serve", "Serve live sessions over WebSocket");
    serve_cmd->add_option("--port", serve.port, "TCP port (0 picks one)");
    serve_cmd->add_option("--address", serve.address, "Listen address");
    serve_cmd->add_option("--data-dir", serve.data_dir, "Directory for session logs");
    serve_cmd->add_option("--speed", serve.speed, "Simulated seconds per wall second")->check(CLI::PositiveNumber);
    serve_cmd->add_option("--static-dir", serve.static_dir, "Serve cockpit assets from this directory")
        ->check(CLI::ExistingDirectory);

    std::string replay_path;
    auto* replay_cmd = app.add_subcommand("replay", "Re-simulate a trial log and verify it");
    replay_cmd->add_option("log", replay_path, "Trial log (.jsonl)")->required();

    AnalyzeArgs an;
    auto* an_cmd = app.add_subcommand("analyze", "Compute human-factors metrics from a CSV file");
    an_cmd->add_option("kind", an.kind, "gaze, eeg, tlx, sus or anova")
        ->required()
        ->check(CLI::IsMember({"gaze", "eeg", "tlx", "sus", "anova"}));
    an_cmd->add_option("--in", an.in, "Input CSV")->required();
    an_cmd->add_option("--threshold", an.threshold, "I-VT threshold (deg/s)")->check(CLI::PositiveNumber);
    an_cmd->add_option("--max-gap", an.max_gap, "Longest gap (s) inside a fixation")->check(CLI::PositiveNumber);
    an_cmd->add_option("--rate", an.rate, "EEG sample rate (Hz); inferred from t when omitted")
        ->check(CLI::PositiveNumber);
    an_cmd->add_option("--window", an.window, "Welch window (s)")->check(CLI::PositiveNumber);
    an_cmd->add_option("--overlap", an.overlap, "Welch overlap fraction")->check(CLI::Range(0.0, 0.99));

    std::string compare_dir;
    auto* cmp_cmd = app.add_subcommand("compare", "Tabulate results per view and cohort");
    cmp_cmd->add_option("--in", compare_dir, "Directory of *.result.json files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    auto lower = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return s;
    };

    try {
        if (*run_cmd) {
            run.view = lower(run.view);
            run.policy = lower(run.policy);
            run.cohort = lower(run.cohort);
            return cmd_run(run, out);
        }
        if (*serve_cmd) return cmd_serve(serve, out);
        if (*replay_cmd) return cmd_replay(replay_path, out);
        if (*an_cmd) return cmd_analyze(an, out);
        if (*cmp_cmd) return cmd_compare(compare_dir, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace deorbit::cli
