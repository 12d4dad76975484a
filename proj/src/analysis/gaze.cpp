#include "deorbit/analysis/gaze.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deorbit/errors.hpp"
#include "deorbit/kernels/kernels.hpp"

namespace deorbit::analysis {

namespace {

struct ValidSeries {
    std::vector<std::size_t> index;
    std::vector<double> t, x, y, z;
};

ValidSeries collect_valid(std::span<const GazeSample> samples) {
    ValidSeries v;
    v.index.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const GazeSample& s = samples[i];
        if (!s.valid) continue;
        if (!std::isfinite(s.t)) throw DataError("gaze sample " + std::to_string(i) + ": non-finite timestamp");
        if (!v.t.empty() && !(s.t > v.t.back()))
            throw DataError("gaze sample " + std::to_string(i) + ": timestamp " + std::to_string(s.t) +
                            " does not increase");
        const double n = norm(s.direction);
        if (!(n > 0.0) || !std::isfinite(n))
            throw DomainError("gaze sample " + std::to_string(i) + ": zero or non-finite direction");
        v.index.push_back(i);
        v.t.push_back(s.t);
        v.x.push_back(s.direction.x / n);
        v.y.push_back(s.direction.y / n);
        v.z.push_back(s.direction.z / n);
    }
    return v;
}

bool is_fixation(const GazeVelocity& v, const IvtConfig& cfg) {
    return v.deg_per_s < cfg.threshold && (v.t1 - v.t0) <= cfg.max_gap;
}

}  // namespace

std::vector<GazeVelocity> gaze_angular_velocity(std::span<const GazeSample> samples) {
    const ValidSeries v = collect_valid(samples);
    const std::size_t n = v.t.size();
    if (n < 2) return {};

    std::vector<double> d(n - 1), c(n - 1);
    kernels::active().adjacent_dot_cross(v.x.data(), v.y.data(), v.z.data(), n, d.data(), c.data());

    std::vector<GazeVelocity> out(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double angle = std::atan2(c[i], d[i]) * kRadToDeg;
        out[i] = {v.index[i], v.index[i + 1], v.t[i], v.t[i + 1], angle / (v.t[i + 1] - v.t[i])};
    }
    return out;
}

std::vector<FixationEvent> detect_fixations(std::span<const GazeSample> samples, const IvtConfig& cfg) {
    const auto vel = gaze_angular_velocity(samples);
    std::vector<FixationEvent> events;

    std::size_t i = 0;
    while (i < vel.size()) {
        if (!is_fixation(vel[i], cfg)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < vel.size() && is_fixation(vel[j + 1], cfg)) ++j;

        // Run of intervals i..j covers valid samples vel[i].from .. vel[j].to.
        Vec3 acc{};
        acc += normalized(samples[vel[i].from].direction);
        for (std::size_t k = i; k <= j; ++k) acc += normalized(samples[vel[k].to].direction);
        const double n = norm(acc);
        FixationEvent ev;
        ev.start = vel[i].t0;
        ev.end = vel[j].t1;
        ev.centroid = n > 0.0 ? acc / n : normalized(samples[vel[i].from].direction);
        ev.first = vel[i].from;
        ev.last = vel[j].to;
        events.push_back(ev);
        i = j + 1;
    }
    return events;
}

FixationMetrics fixation_metrics(std::span<const FixationEvent> events, double task_duration) {
    if (!(task_duration > 0.0)) throw ValidationError("task_duration must be positive");
    FixationMetrics m;
    m.fixation_rate = static_cast<double>(events.size()) / task_duration;
    if (!events.empty()) {
        double total = 0.0;
        for (const auto& e : events) total += e.end - e.start;
        m.mean_fixation_duration = total / static_cast<double>(events.size());
    }
    return m;
}

std::optional<SaccadeStats> saccade_stats(std::span<const GazeSample> samples,
                                          std::span<const FixationEvent> events, const IvtConfig& cfg) {
    const auto vel = gaze_angular_velocity(samples);
    SaccadeStats s;
    double total = 0.0;
    std::size_t e = 0;
    for (const auto& v : vel) {
        if (v.t1 - v.t0 > cfg.max_gap) continue;
        while (e < events.size() && events[e].end < v.t1) ++e;
        // An interval is inside an event when both endpoints lie within it.
        const bool inside = e < events.size() && events[e].start <= v.t0 && v.t1 <= events[e].end;
        if (inside) continue;
        total += v.deg_per_s;
        s.peak = std::max(s.peak, v.deg_per_s);
        ++s.intervals;
    }
    if (s.intervals == 0) return std::nullopt;
    s.mean = total / static_cast<double>(s.intervals);
    return s;
}

}  // namespace deorbit::analysis
