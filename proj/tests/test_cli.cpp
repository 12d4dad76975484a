#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "deorbit/cli.hpp"
#include "deorbit/session/session.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "deorbit");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Outcome o;
    o.code = deorbit::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("deorbit-cli-" + tag + "-" + deorbit::make_session_id());
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
    std::string file(const std::string& name, const std::string& content) const {
        std::ofstream(path / name) << content;
        return (path / name).string();
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Json first_json_line(const std::string& out) {
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line.front() == '{') return Json::parse(line);
    return {};
}

}  // namespace

TEST_CASE("fixed six-decimal formatting") {
    using deorbit::cli::fixed6;
    CHECK(fixed6(1.0) == "1.000000");
    CHECK(fixed6(-0.0) == "0.000000");
    CHECK(fixed6(-1e-9) == "0.000000");
    CHECK(fixed6(72.86) == "72.860000");
    CHECK(fixed6(-3.14159265) == "-3.141593");
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == deorbit::cli::kExitUsage);
    CHECK(run({"launch"}).code == deorbit::cli::kExitUsage);
    CHECK(run({"run", "--view", "side"}).code == deorbit::cli::kExitUsage);
    CHECK(run({"run"}).code == deorbit::cli::kExitUsage);
    CHECK(run({"run", "--view", "bottom", "--n", "0"}).code == deorbit::cli::kExitUsage);
    CHECK(run({"analyze", "ecg", "--in", "x"}).code == deorbit::cli::kExitUsage);
    CHECK(run({"compare"}).code == deorbit::cli::kExitUsage);
    CHECK(run({"--help"}).code == deorbit::cli::kExitOk);
}

TEST_CASE("run writes logs and results, replay verifies them") {
    TempDir dir("run");
    const Outcome bottom = run({"run", "--view", "bottom", "--n", "1", "--seed", "0", "--out-dir", dir.str()});
    REQUIRE(bottom.code == 0);
    const Json b = first_json_line(bottom.out);
    CHECK(b.at("success") == true);
    CHECK(b.at("seed") == 0);
    CHECK(b.at("initial_offset").at("yaw") == 104.0);
    CHECK(fs::exists(dir.path / "bottom-pilot-seed0.jsonl"));
    CHECK(fs::exists(dir.path / "bottom-pilot-seed0.result.json"));

    const Outcome front = run({"run", "--view", "front", "--n", "1", "--seed", "0", "--out-dir", dir.str()});
    REQUIRE(front.code == 0);
    const Json f = first_json_line(front.out);
    CHECK(f.at("success") == true);
    CHECK(f.at("completion_time").get<double>() > b.at("completion_time").get<double>());

    const Outcome rep = run({"replay", (dir.path / "bottom-pilot-seed0.jsonl").string()});
    REQUIRE(rep.code == 0);
    const Json r = first_json_line(rep.out);
    CHECK(r.at("frames_verified") == true);
    CHECK(r.at("result_verified") == true);
    CHECK(r.at("completion_time") == b.at("completion_time"));
    CHECK(r.at("fuel") == b.at("fuel"));

    // The header records the seed.
    std::ifstream log(dir.path / "bottom-pilot-seed0.jsonl");
    std::string header;
    std::getline(log, header);
    CHECK(Json::parse(header).at("seed") == 0);
}

TEST_CASE("replay rejects tampered logs and results") {
    TempDir dir("tamper");
    REQUIRE(run({"run", "--view", "front", "--n", "1", "--seed", "2", "--out-dir", dir.str()}).code == 0);
    const fs::path log = dir.path / "front-pilot-seed2.jsonl";
    const fs::path res = dir.path / "front-pilot-seed2.result.json";

    Json stored = Json::parse(slurp(res));
    stored["fuel"] = stored["fuel"].get<double>() + 1.0;
    std::ofstream(res) << stored.dump(2);
    const Outcome bad_result = run({"replay", log.string()});
    CHECK(bad_result.code == deorbit::cli::kExitData);
    CHECK(bad_result.err.find("differs") != std::string::npos);
    fs::remove(res);
    CHECK(run({"replay", log.string()}).code == 0);

    std::string text = slurp(log);
    text.erase(text.rfind("{\"kind\":\"end\""));
    std::ofstream(log) << text;
    const Outcome truncated = run({"replay", log.string()});
    CHECK(truncated.code == deorbit::cli::kExitData);
    CHECK(truncated.err.find("truncated") != std::string::npos);

    CHECK(run({"replay", (dir.path / "absent.jsonl").string()}).code == deorbit::cli::kExitData);
}

TEST_CASE("an unwritable output directory is a data error") {
    TempDir dir("ro");
    const std::string blocker = dir.file("file", "x");
    const Outcome o = run({"run", "--view", "bottom", "--out-dir", blocker + "/sub"});
    CHECK(o.code == deorbit::cli::kExitData);
    CHECK_FALSE(o.err.empty());
}

TEST_CASE("identical seeded batches are byte-identical") {
    TempDir a("batch-a"), b("batch-b");
    const Outcome ra = run({"run", "--view", "front", "--n", "4", "--seed", "10", "--out-dir", a.str()});
    const Outcome rb = run({"run", "--view", "front", "--n", "4", "--seed", "10", "--out-dir", b.str()});
    REQUIRE(ra.code == 0);
    CHECK(ra.out == rb.out);
    int files = 0;
    for (const auto& e : fs::directory_iterator(a.path)) {
        CHECK(slurp(e.path()) == slurp(b.path / e.path().filename()));
        ++files;
    }
    CHECK(files == 8);
}

TEST_CASE("compare tabulates the four cells") {
    TempDir dir("cmp");
    for (const char* view : {"bottom", "front"})
        for (const char* cohort : {"pilot", "civilian"})
            REQUIRE(run({"run", "--view", view, "--cohort", cohort, "--n", "2", "--out-dir", dir.str()}).code == 0);

    const Outcome o = run({"compare", "--in", dir.str()});
    REQUIRE(o.code == 0);
    CHECK(o.out.find("bottom  pilot") != std::string::npos);
    std::istringstream in(o.out);
    std::string last;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) last = line;
    const Json j = Json::parse(last);
    REQUIRE(j.at("cells").size() == 4);
    for (const auto& c : j.at("cells")) CHECK(c.at("n") == 2);
    // Same seeds for both cohorts: identical trials, zero deltas between cohorts' cells.
    CHECK(j.at("cells")[0].at("mean_completion_time") == j.at("cells")[1].at("mean_completion_time"));
    for (const auto& d : j.at("deltas_front_minus_bottom")) CHECK(d.at("mean_completion_time").get<double>() > 0.0);
    CHECK(run({"compare", "--in", dir.str()}).out == o.out);
}

TEST_CASE("compare ignores failed runs and needs every cell") {
    TempDir dir("cmp-fail");
    REQUIRE(run({"run", "--view", "bottom", "--n", "1", "--out-dir", dir.str()}).code == 0);
    REQUIRE(run({"run", "--view", "bottom", "--cohort", "civilian", "--n", "1", "--out-dir", dir.str()}).code == 0);
    const Outcome missing = run({"compare", "--in", dir.str()});
    CHECK(missing.code == deorbit::cli::kExitData);
    CHECK(missing.err.find("front/pilot") != std::string::npos);

    // A front trial that fails (idle pilot) does not populate its cell.
    REQUIRE(run({"run", "--view", "front", "--policy", "idle", "--n", "1", "--out-dir", dir.str()}).code == 0);
    REQUIRE(run({"run", "--view", "front", "--cohort", "civilian", "--n", "1", "--out-dir", dir.str()}).code == 0);
    const Outcome still = run({"compare", "--in", dir.str()});
    CHECK(still.code == deorbit::cli::kExitData);
    CHECK(still.err.find("front/pilot") != std::string::npos);

    CHECK(run({"compare", "--in", (dir.path / "nope").string()}).code == deorbit::cli::kExitData);
}

TEST_CASE("analyze gaze") {
    TempDir dir("gaze");
    std::string csv = "t,dx,dy,dz,pupil,valid\n";
    for (int i = 0; i <= 120; ++i) csv += std::to_string(i / 120.0) + ",0.1,0.2,1.0,3.0,1\n";
    const Outcome o = run({"analyze", "gaze", "--in", dir.file("g.csv", csv)});
    REQUIRE(o.code == 0);
    const Json j = first_json_line(o.out);
    CHECK(j.at("fixations") == 1);
    CHECK(j.at("fixation_rate").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("mean_fixation_duration").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("saccade_mean_velocity").is_null());

    const Outcome bad = run({"analyze", "gaze", "--in", dir.file("b.csv", "t,dx,dy,dz,pupil,valid\n0,1,0,0,3,1\n0.1,1,0\n")});
    CHECK(bad.code == deorbit::cli::kExitData);
    CHECK(bad.err.find(":3:") != std::string::npos);
    CHECK(run({"analyze", "gaze", "--in", (dir.path / "none.csv").string()}).code == deorbit::cli::kExitData);
}

TEST_CASE("analyze questionnaires") {
    TempDir dir("sheets");
    const Outcome sus =
        run({"analyze", "sus", "--in", dir.file("s.csv", "subject,q1,q2,q3,q4,q5,q6,q7,q8,q9,q10\np1,3,3,3,3,3,3,3,3,3,3\n"
                                                         "p2,5,1,5,1,5,1,5,1,5,1\n")});
    REQUIRE(sus.code == 0);
    const Json s = first_json_line(sus.out);
    CHECK(s.at("sheets")[0].at("score") == 50.0);
    CHECK(s.at("sheets")[1].at("score") == 100.0);
    CHECK(s.at("mean") == 75.0);

    const Outcome tlx = run({"analyze", "tlx", "--in",
                             dir.file("t.csv", "mental,physical,temporal,performance,effort,frustration\n"
                                               "50,50,50,50,50,50\n")});
    REQUIRE(tlx.code == 0);
    CHECK(first_json_line(tlx.out).at("mean") == 50.0);

    const Outcome range = run({"analyze", "sus", "--in",
                               dir.file("r.csv", "q1,q2,q3,q4,q5,q6,q7,q8,q9,q10\n3,3,3,3,3,3,3,3,3,6\n")});
    CHECK(range.code == deorbit::cli::kExitData);
    CHECK(range.err.find(":2:") != std::string::npos);
}

TEST_CASE("analyze eeg and anova") {
    TempDir dir("eeg");
    std::string csv = "t,Fz,Pz\n";
    for (int i = 0; i < 128 * 8; ++i) {
        const double t = i / 128.0;
        char row[128];
        std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g\n", t, std::sin(2 * 3.14159265358979323846 * 10 * t),
                      std::sin(2 * 3.14159265358979323846 * 6 * t));
        csv += row;
    }
    const Outcome eeg = run({"analyze", "eeg", "--in", dir.file("e.csv", csv)});
    REQUIRE(eeg.code == 0);
    const Json e = first_json_line(eeg.out);
    CHECK(e.at("rate").get<double>() == doctest::Approx(128.0));
    CHECK(e.at("channels").size() == 2);
    CHECK(e.at("channels")[0].at("alpha").get<double>() > 10 * e.at("channels")[0].at("theta").get<double>());
    CHECK(e.at("task_load_index").is_number());

    const Outcome anova = run({"analyze", "anova", "--in",
                               dir.file("m.csv", "subject,group,a,b\ns1,0,10,14\ns2,0,12,15\ns3,1,9,9.5\ns4,1,13,12\n")});
    REQUIRE(anova.code == 0);
    const Json a = first_json_line(anova.out);
    CHECK(a.at("within").at("F").get<double>() == doctest::Approx(13.0));
    CHECK(a.at("interaction").at("F").get<double>() == doctest::Approx(17.307692).epsilon(1e-6));
    CHECK(a.at("n_per_group") == 2);
}

TEST_CASE("analyze output is deterministic") {
    TempDir dir("det");
    const std::string f = dir.file("m.csv", "subject,group,a,b\ns1,0,10,14\ns2,0,12,15\ns3,1,9,9.5\ns4,1,13,12\n");
    CHECK(run({"analyze", "anova", "--in", f}).out == run({"analyze", "anova", "--in", f}).out);
}
