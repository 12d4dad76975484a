#include "deorbit/analysis/readers.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>

#include "deorbit/errors.hpp"

namespace deorbit::analysis {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

class CsvReader {
public:
    CsvReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    // Next non-blank, non-comment row; false at end of input.
    bool next(std::vector<std::string>& fields) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const std::string t = trim(line);
            if (t.empty() || t.front() == '#') continue;
            fields = split(t);
            return true;
        }
        if (in_.bad()) fail("read error");
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw DataError(source_ + ":" + std::to_string(line_) + ": " + what);
    }

    double number(const std::string& field, const std::string& column) const {
        double v = 0.0;
        const char* b = field.data();
        const char* e = field.data() + field.size();
        const auto [p, ec] = std::from_chars(b, e, v);
        if (field.empty() || ec != std::errc() || p != e || !std::isfinite(v))
            fail("column '" + column + "': expected a finite number, got '" + field + "'");
        return v;
    }

    bool flag(const std::string& field, const std::string& column) const {
        const std::string f = lower(field);
        if (f == "1" || f == "true") return true;
        if (f == "0" || f == "false") return false;
        fail("column '" + column + "': expected 0/1 or true/false, got '" + field + "'");
    }

    void expect_width(const std::vector<std::string>& fields, std::size_t n) const {
        if (fields.size() != n)
            fail("expected " + std::to_string(n) + " fields, got " + std::to_string(fields.size()));
    }

    std::vector<std::string> header() {
        std::vector<std::string> h;
        if (!next(h)) fail("empty file (missing header)");
        for (auto& c : h) c = lower(c);
        return h;
    }

    std::size_t line() const { return line_; }

private:
    std::istream& in_;
    std::string source_;
    std::size_t line_ = 0;
};

void expect_header(const CsvReader& r, const std::vector<std::string>& got, const std::vector<std::string>& want) {
    if (got != want) {
        std::string w;
        for (const auto& c : want) w += (w.empty() ? "" : ",") + c;
        r.fail("header must be '" + w + "'");
    }
}

template <typename Sheet>
std::vector<Labeled<Sheet>> read_sheets(std::istream& in, const std::string& source, const std::vector<std::string>& cols,
                                        const std::function<void(const Sheet&)>& validate) {
    CsvReader r(in, source);
    std::vector<std::string> h = r.header();
    const bool has_subject = !h.empty() && (h.front() == "subject" || h.front() == "id");
    if (has_subject) h.erase(h.begin());
    expect_header(r, h, cols);

    std::vector<Labeled<Sheet>> out;
    std::vector<std::string> f;
    while (r.next(f)) {
        r.expect_width(f, cols.size() + (has_subject ? 1 : 0));
        Labeled<Sheet> row;
        std::size_t off = 0;
        if (has_subject) {
            row.subject = f[0];
            off = 1;
        } else {
            row.subject = std::to_string(out.size() + 1);
        }
        for (std::size_t i = 0; i < cols.size(); ++i) row.sheet[i] = r.number(f[i + off], cols[i]);
        try {
            validate(row.sheet);
        } catch (const ValidationError& e) {
            r.fail(e.what());
        }
        out.push_back(std::move(row));
    }
    if (out.empty()) r.fail("no data rows");
    return out;
}

}  // namespace

std::vector<GazeSample> read_gaze_csv(std::istream& in, const std::string& source) {
    CsvReader r(in, source);
    expect_header(r, r.header(), {"t", "dx", "dy", "dz", "pupil", "valid"});
    std::vector<GazeSample> out;
    std::vector<std::string> f;
    while (r.next(f)) {
        r.expect_width(f, 6);
        GazeSample s;
        s.t = r.number(f[0], "t");
        s.direction = {r.number(f[1], "dx"), r.number(f[2], "dy"), r.number(f[3], "dz")};
        s.pupil_diameter = r.number(f[4], "pupil");
        s.valid = r.flag(f[5], "valid");
        if (!out.empty() && !(s.t > out.back().t)) r.fail("timestamp does not increase");
        if (s.valid && norm(s.direction) == 0.0) r.fail("valid sample with zero direction");
        out.push_back(s);
    }
    return out;
}

std::vector<EegChannelRecord> read_eeg_csv(std::istream& in, const std::string& source, std::optional<double> rate) {
    CsvReader r(in, source);
    std::vector<std::string> h;
    if (!r.next(h)) r.fail("empty file (missing header)");
    if (h.size() < 2 || lower(h[0]) != "t") r.fail("header must be 't' followed by one or more channel labels");

    std::vector<EegChannelRecord> ch(h.size() - 1);
    for (std::size_t c = 0; c < ch.size(); ++c) {
        if (h[c + 1].empty()) r.fail("empty channel label in column " + std::to_string(c + 2));
        ch[c].label = h[c + 1];
    }

    std::vector<double> t;
    std::vector<std::string> f;
    while (r.next(f)) {
        r.expect_width(f, h.size());
        const double ti = r.number(f[0], "t");
        if (!t.empty() && !(ti > t.back())) r.fail("timestamp does not increase");
        t.push_back(ti);
        for (std::size_t c = 0; c < ch.size(); ++c) ch[c].samples.push_back(r.number(f[c + 1], ch[c].label));
    }
    if (rate) {
        if (!(*rate > 0.0)) throw ValidationError("sample rate must be positive");
        for (auto& c : ch) c.rate = *rate;
    } else {
        if (t.size() < 2) r.fail("need at least two rows to infer the sample rate");
        const double fs = static_cast<double>(t.size() - 1) / (t.back() - t.front());
        for (auto& c : ch) c.rate = fs;
    }
    return ch;
}

std::vector<Labeled<TlxSheet>> read_tlx_csv(std::istream& in, const std::string& source) {
    return read_sheets<TlxSheet>(in, source, {"mental", "physical", "temporal", "performance", "effort", "frustration"},
                                 [](const TlxSheet& s) { tlx_score(s); });
}

std::vector<Labeled<SusSheet>> read_sus_csv(std::istream& in, const std::string& source) {
    return read_sheets<SusSheet>(in, source, {"q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8", "q9", "q10"},
                                 [](const SusSheet& s) { sus_score(s); });
}

std::vector<MixedObservation> read_mixed_csv(std::istream& in, const std::string& source) {
    CsvReader r(in, source);
    expect_header(r, r.header(), {"subject", "group", "a", "b"});
    std::vector<MixedObservation> out;
    std::vector<std::string> f;
    while (r.next(f)) {
        r.expect_width(f, 4);
        MixedObservation o;
        o.subject = f[0];
        const std::string g = lower(f[1]);
        if (g == "0" || g == "pilot") {
            o.group = 0;
        } else if (g == "1" || g == "civilian") {
            o.group = 1;
        } else {
            r.fail("column 'group': expected 0/1 or pilot/civilian, got '" + f[1] + "'");
        }
        o.a = r.number(f[2], "a");
        o.b = r.number(f[3], "b");
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace deorbit::analysis
