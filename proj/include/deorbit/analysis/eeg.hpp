#pragma once

// EEG spectral analysis: Welch power spectral density, band powers and the
// two workload ratios derived from them.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace deorbit::analysis {

struct EegChannelRecord {
    std::string label;
    std::vector<double> samples;  // uV
    double rate = 128.0;          // Hz
};

/// Half-open frequency interval [lo, hi) in Hz.
struct Band {
    double lo = 0.0;
    double hi = 0.0;
};

struct BandSpec {
    Band theta{4.0, 8.0};
    Band alpha{8.0, 12.0};
    Band beta{16.0, 25.0};
    Band gamma{25.0, 45.0};

    void validate() const;
};

struct WelchConfig {
    double window = 2.0;   // s
    double overlap = 0.5;  // fraction of a window
};

/// One-sided PSD in uV^2/Hz on bins k * resolution, k = 0..nfft/2.
struct Psd {
    std::vector<double> density;
    double resolution = 0.0;  // Hz per bin
    std::size_t segments = 0;
};

/// Averaged periodogram: Hann-tapered segments with the segment mean removed.
/// Throws DataError when the record is shorter than one window or holds
/// non-finite samples, ValidationError for a bad rate or window.
Psd welch_psd(const EegChannelRecord& rec, const WelchConfig& cfg = {});

/// Mean PSD over bins with lo <= f < hi. Throws DataError when no bin falls in the band.
double band_power(const Psd& psd, Band band);
double band_power(const EegChannelRecord& rec, Band band, const WelchConfig& cfg = {});

struct BandPowers {
    double theta = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

BandPowers band_powers(const EegChannelRecord& rec, const BandSpec& bands = {}, const WelchConfig& cfg = {});

/// beta / (alpha + theta). Throws DomainError when alpha + theta is zero.
double engagement_index(double theta_p, double alpha_p, double beta_p);

/// frontal theta / parietal alpha. Throws DomainError when parietal alpha is zero.
double task_load_index(double frontal_theta_p, double parietal_alpha_p);

struct TliChannels {
    std::vector<std::string> frontal{"Fz", "F3", "F4", "AF3", "AF4"};
    std::vector<std::string> parietal{"Pz", "P3", "P4", "P7", "P8"};
};

struct EegSummary {
    std::vector<std::pair<std::string, BandPowers>> channels;
    BandPowers mean;  // across all channels
    double engagement = 0.0;
    std::optional<double> task_load;  // absent when either channel set is missing
};

/// Band powers per channel, engagement on the channel-averaged powers, and the
/// task load index from mean frontal theta over mean parietal alpha.
EegSummary summarize_eeg(std::span<const EegChannelRecord> records, const BandSpec& bands = {},
                         const WelchConfig& cfg = {}, const TliChannels& tli = {});

}  // namespace deorbit::analysis
