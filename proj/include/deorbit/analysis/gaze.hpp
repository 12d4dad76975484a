#pragma once

// Eye-tracker processing: angular gaze velocity and velocity-threshold (I-VT)
// fixation identification.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "deorbit/vec.hpp"

namespace deorbit::analysis {

struct GazeSample {
    double t = 0.0;  // s
    Vec3 direction{0, 0, 1};
    double pupil_diameter = 0.0;  // mm
    bool valid = true;
};

/// Angular velocity between two consecutive valid samples.
/// `from`/`to` index the original sample series.
struct GazeVelocity {
    std::size_t from = 0;
    std::size_t to = 0;
    double t0 = 0.0;
    double t1 = 0.0;
    double deg_per_s = 0.0;
};

struct FixationEvent {
    double start = 0.0;  // s
    double end = 0.0;    // s
    Vec3 centroid;
    std::size_t first = 0;  // first and last sample index (original series), inclusive
    std::size_t last = 0;
};

struct IvtConfig {
    double threshold = 30.0;  // deg/s
    double max_gap = 0.100;   // s; longer gaps between valid samples split runs
};

/// Velocities over consecutive valid samples. Invalid samples are dropped first.
/// Throws DataError when valid timestamps are not strictly increasing and
/// DomainError for a zero direction vector.
std::vector<GazeVelocity> gaze_angular_velocity(std::span<const GazeSample> samples);

/// A velocity interval counts as fixation when it is below the threshold and
/// does not bridge a gap. Maximal runs of such intervals form one event
/// spanning the run's first through last sample.
std::vector<FixationEvent> detect_fixations(std::span<const GazeSample> samples, const IvtConfig& cfg = {});

struct FixationMetrics {
    double fixation_rate = 0.0;  // 1/s
    std::optional<double> mean_fixation_duration;
};

FixationMetrics fixation_metrics(std::span<const FixationEvent> events, double task_duration);

struct SaccadeStats {
    double mean = 0.0;  // deg/s
    double peak = 0.0;
    std::size_t intervals = 0;
};

/// Statistics over velocity intervals that lie outside every fixation event.
/// Intervals bridging a gap longer than cfg.max_gap are not counted.
std::optional<SaccadeStats> saccade_stats(std::span<const GazeSample> samples,
                                          std::span<const FixationEvent> events, const IvtConfig& cfg = {});

}  // namespace deorbit::analysis
