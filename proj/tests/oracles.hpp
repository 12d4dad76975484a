#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary. Deliberately naive: no kernels, no shared helpers from
// the library beyond the Vec3 basics.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "deorbit/analysis/gaze.hpp"
#include "deorbit/analysis/stats.hpp"
#include "deorbit/vec.hpp"
#include "deorbit/viewport.hpp"

namespace oracle {

using deorbit::Vec3;
using deorbit::analysis::GazeSample;

struct Event {
    double start, end;
    std::size_t first, last;
    Vec3 centroid;
};

/// Label each valid-sample interval, then merge consecutive fixation labels.
inline std::vector<Event> ivt(const std::vector<GazeSample>& s, double threshold = 30.0, double max_gap = 0.1) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i].valid) idx.push_back(i);

    std::vector<bool> fix;
    for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
        const GazeSample& a = s[idx[k]];
        const GazeSample& b = s[idx[k + 1]];
        const double dt = b.t - a.t;
        const double ang = deorbit::angle_between(a.direction, b.direction) * deorbit::kRadToDeg;
        fix.push_back(ang / dt < threshold && dt <= max_gap);
    }

    std::vector<Event> out;
    bool open = false;
    std::vector<Vec3> members;
    for (std::size_t k = 0; k < fix.size(); ++k) {
        if (fix[k]) {
            if (!open) {
                out.push_back({s[idx[k]].t, 0.0, idx[k], 0, {}});
                members = {deorbit::normalized(s[idx[k]].direction)};
                open = true;
            }
            out.back().end = s[idx[k + 1]].t;
            out.back().last = idx[k + 1];
            members.push_back(deorbit::normalized(s[idx[k + 1]].direction));
        }
        if (open && (!fix[k] || k + 1 == fix.size())) {
            Vec3 c{};
            for (const auto& m : members) c += m;
            out.back().centroid = deorbit::normalized(c);
            open = false;
        }
    }
    return out;
}

/// Random trace mixing slow drift, saccades, speeds near the threshold,
/// dropped samples and occasional recording gaps.
inline std::vector<GazeSample> random_trace(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = 20 + static_cast<int>(u(rng) * 380);
    std::vector<GazeSample> out;
    Vec3 d = deorbit::normalized(Vec3{u(rng) - 0.5, u(rng) - 0.5, 1.0});
    double t = u(rng);
    int mode = 0;  // 0 drift, 1 saccade, 2 near threshold
    for (int i = 0; i < n; ++i) {
        if (u(rng) < 0.12) mode = static_cast<int>(u(rng) * 3.0);
        double speed = mode == 0 ? u(rng) * 25.0 : (mode == 1 ? 60.0 + u(rng) * 400.0 : 25.0 + u(rng) * 10.0);
        double dt = 1.0 / 120.0;
        if (u(rng) < 0.01) dt += 0.05 + u(rng) * 0.2;  // recording gap
        t += dt;
        // Rotate about a random axis perpendicular to d.
        const Vec3 r = deorbit::normalized(Vec3{u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5});
        const Vec3 axis = deorbit::normalized(deorbit::cross(d, r));
        d = deorbit::normalized(deorbit::rotate(deorbit::axis_angle(axis, speed * dt * deorbit::kDegToRad), d));
        GazeSample g;
        g.t = t;
        g.direction = d * (0.5 + u(rng));  // arbitrary length, direction matters
        g.pupil_diameter = 3.0 + u(rng);
        g.valid = u(rng) > 0.03;
        if (!g.valid && u(rng) < 0.5) g.direction = {0, 0, 0};
        out.push_back(g);
    }
    return out;
}

/// Two 0.5 s dwells joined by a 10 degree saccade at exactly 200 deg/s, 120 Hz.
struct GoldenTrace {
    std::vector<GazeSample> samples;
    double fix1_end, fix2_start;
};

inline GoldenTrace golden_trace() {
    GoldenTrace g;
    const double dt = 1.0 / 120.0;
    const double step = 200.0 * dt;  // degrees per sample during the saccade
    const int dwell = 61;            // samples -> 0.5 s
    const int sacc = 6;              // intervals of 200 deg/s
    double az = 0.0;
    int i = 0;
    auto push = [&](double a) {
        const double r = a * deorbit::kDegToRad;
        g.samples.push_back({i * dt, {std::sin(r), 0.0, std::cos(r)}, 3.5, true});
        ++i;
    };
    for (int k = 0; k < dwell; ++k) push(az);
    g.fix1_end = (i - 1) * dt;
    for (int k = 0; k < sacc; ++k) push(az += step);
    g.fix2_start = (i - 1) * dt;
    for (int k = 1; k < dwell; ++k) push(az);
    return g;
}

/// Two-factor mixed ANOVA from cell, marginal and subject means.
struct AnovaSS {
    double ss_between, ss_subjects, ss_within, ss_inter, ss_resid;
};

inline AnovaSS mixed_anova_textbook(const std::vector<deorbit::analysis::MixedObservation>& d) {
    const double N = static_cast<double>(d.size());
    double M = 0.0, G[2] = {0, 0}, W[2] = {0, 0}, C[2][2] = {{0, 0}, {0, 0}};
    double ng[2] = {0, 0};
    for (const auto& o : d) {
        M += o.a + o.b;
        G[o.group] += o.a + o.b;
        W[0] += o.a;
        W[1] += o.b;
        C[o.group][0] += o.a;
        C[o.group][1] += o.b;
        ng[o.group] += 1.0;
    }
    M /= 2.0 * N;
    for (int g = 0; g < 2; ++g) {
        G[g] /= 2.0 * ng[g];
        C[g][0] /= ng[g];
        C[g][1] /= ng[g];
    }
    W[0] /= N;
    W[1] /= N;

    AnovaSS s{};
    for (int g = 0; g < 2; ++g) s.ss_between += 2.0 * ng[g] * (G[g] - M) * (G[g] - M);
    for (int j = 0; j < 2; ++j) s.ss_within += N * (W[j] - M) * (W[j] - M);
    for (int g = 0; g < 2; ++g)
        for (int j = 0; j < 2; ++j) {
            const double e = C[g][j] - G[g] - W[j] + M;
            s.ss_inter += ng[g] * e * e;
        }
    for (const auto& o : d) {
        const double S = 0.5 * (o.a + o.b);
        s.ss_subjects += 2.0 * (S - G[o.group]) * (S - G[o.group]);
        const double x[2] = {o.a, o.b};
        for (int j = 0; j < 2; ++j) {
            const double e = x[j] - C[o.group][j] - S + G[o.group];
            s.ss_resid += e * e;
        }
    }
    return s;
}

/// Full-disk visibility by brute force: sample the Earth's limb circle at
/// `points` directions and test every one against the camera's field of view.
inline bool full_disk_brute(const deorbit::CameraSpec& cam, const Vec3& nadir_body, double half_angle_deg,
                            int points = 3600) {
    const Vec3 n = deorbit::normalized(nadir_body);
    Vec3 ref = std::fabs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 e1 = deorbit::normalized(deorbit::cross(n, ref));
    const Vec3 e2 = deorbit::cross(n, e1);
    const double h = half_angle_deg * deorbit::kDegToRad;
    for (int k = 0; k < points; ++k) {
        const double phi = 2.0 * deorbit::kPi * k / points;
        const Vec3 limb = n * std::cos(h) + (e1 * std::cos(phi) + e2 * std::sin(phi)) * std::sin(h);
        const double az = std::atan2(deorbit::dot(limb, cam.right()), deorbit::dot(limb, cam.boresight));
        const double el = std::asin(std::clamp(deorbit::dot(limb, cam.up), -1.0, 1.0));
        if (std::fabs(az) * deorbit::kRadToDeg > 0.5 * cam.fov_h || std::fabs(el) * deorbit::kRadToDeg > 0.5 * cam.fov_v)
            return false;
    }
    return true;
}

}  // namespace oracle
