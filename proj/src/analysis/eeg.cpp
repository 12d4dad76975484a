#include "deorbit/analysis/eeg.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include "deorbit/errors.hpp"
#include "deorbit/kernels/kernels.hpp"
#include "deorbit/vec.hpp"

namespace deorbit::analysis {

namespace {

// FFTW's planner is not thread-safe; execution with fresh arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

class R2cPlan {
public:
    R2cPlan(int n, double* in, fftw_complex* out) {
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
    }
    ~R2cPlan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    R2cPlan(const R2cPlan&) = delete;
    R2cPlan& operator=(const R2cPlan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

std::vector<double> hann(std::size_t n) {
    // Periodic Hann, the usual choice for spectral averaging.
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
    return w;
}

void check_band(const Band& b, const char* name) {
    if (!(b.lo >= 0.0) || !(b.hi > b.lo)) throw ValidationError(std::string("band ") + name + " must satisfy 0 <= lo < hi");
}

}  // namespace

void BandSpec::validate() const {
    check_band(theta, "theta");
    check_band(alpha, "alpha");
    check_band(beta, "beta");
    check_band(gamma, "gamma");
    if (theta.hi > alpha.lo || alpha.hi > beta.lo || beta.hi > gamma.lo)
        throw ValidationError("bands must be ascending and non-overlapping");
}

Psd welch_psd(const EegChannelRecord& rec, const WelchConfig& cfg) {
    if (!(rec.rate > 0.0) || !std::isfinite(rec.rate)) throw ValidationError("sample rate must be positive");
    if (!(cfg.window > 0.0)) throw ValidationError("window must be positive");
    if (!(cfg.overlap >= 0.0 && cfg.overlap < 1.0)) throw ValidationError("overlap must be in [0, 1)");

    const auto nseg = static_cast<std::size_t>(std::lround(cfg.window * rec.rate));
    if (nseg < 2) throw ValidationError("window shorter than two samples");
    if (rec.samples.size() < nseg)
        throw DataError("channel " + rec.label + ": " + std::to_string(rec.samples.size()) +
                        " samples is shorter than one " + std::to_string(nseg) + "-sample window");
    for (std::size_t i = 0; i < rec.samples.size(); ++i)
        if (!std::isfinite(rec.samples[i]))
            throw DataError("channel " + rec.label + ": non-finite sample at index " + std::to_string(i));

    const auto step = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(nseg * (1.0 - cfg.overlap))));
    const std::size_t bins = nseg / 2 + 1;
    const std::vector<double> w = hann(nseg);
    const kernels::KernelTable& k = kernels::active();
    const double w2 = k.sum_sq_dev(w.data(), w.size(), 0.0);

    FftwBuffer<double> in(static_cast<double*>(fftw_malloc(sizeof(double) * nseg)));
    FftwBuffer<fftw_complex> out(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
    if (!in || !out) throw std::bad_alloc();
    const R2cPlan plan(static_cast<int>(nseg), in.get(), out.get());

    Psd psd;
    psd.density.assign(bins, 0.0);
    psd.resolution = rec.rate / static_cast<double>(nseg);

    const double scale = 2.0 / (rec.rate * w2);
    for (std::size_t start = 0; start + nseg <= rec.samples.size(); start += step) {
        const double* seg = rec.samples.data() + start;
        const double m = k.sum(seg, nseg) / static_cast<double>(nseg);
        k.window_detrend(seg, w.data(), m, in.get(), nseg);
        plan.execute();
        k.accumulate_power(reinterpret_cast<const double*>(out.get()), scale, psd.density.data(), bins);
        ++psd.segments;
    }

    const double inv = 1.0 / static_cast<double>(psd.segments);
    for (double& p : psd.density) p *= inv;
    // DC and (for even lengths) Nyquist have no mirrored negative-frequency twin.
    psd.density.front() *= 0.5;
    if (nseg % 2 == 0) psd.density.back() *= 0.5;
    return psd;
}

double band_power(const Psd& psd, Band band) {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < psd.density.size(); ++i) {
        const double f = static_cast<double>(i) * psd.resolution;
        if (f >= band.lo && f < band.hi) {
            s += psd.density[i];
            ++n;
        }
    }
    if (n == 0) throw DataError("no spectral bins in band [" + std::to_string(band.lo) + ", " + std::to_string(band.hi) + ")");
    return s / static_cast<double>(n);
}

double band_power(const EegChannelRecord& rec, Band band, const WelchConfig& cfg) {
    return band_power(welch_psd(rec, cfg), band);
}

BandPowers band_powers(const EegChannelRecord& rec, const BandSpec& bands, const WelchConfig& cfg) {
    bands.validate();
    const Psd psd = welch_psd(rec, cfg);
    return {band_power(psd, bands.theta), band_power(psd, bands.alpha), band_power(psd, bands.beta),
            band_power(psd, bands.gamma)};
}

double engagement_index(double theta_p, double alpha_p, double beta_p) {
    const double den = alpha_p + theta_p;
    if (den == 0.0) throw DomainError("engagement index undefined: alpha + theta power is zero");
    return beta_p / den;
}

double task_load_index(double frontal_theta_p, double parietal_alpha_p) {
    if (parietal_alpha_p == 0.0) throw DomainError("task load index undefined: parietal alpha power is zero");
    return frontal_theta_p / parietal_alpha_p;
}

EegSummary summarize_eeg(std::span<const EegChannelRecord> records, const BandSpec& bands, const WelchConfig& cfg,
                         const TliChannels& tli) {
    if (records.empty()) throw DataError("no EEG channels");
    EegSummary out;
    double ft = 0.0, pa = 0.0;
    std::size_t nf = 0, np = 0;
    for (const auto& rec : records) {
        const BandPowers p = band_powers(rec, bands, cfg);
        out.channels.emplace_back(rec.label, p);
        out.mean.theta += p.theta;
        out.mean.alpha += p.alpha;
        out.mean.beta += p.beta;
        out.mean.gamma += p.gamma;
        if (std::find(tli.frontal.begin(), tli.frontal.end(), rec.label) != tli.frontal.end()) {
            ft += p.theta;
            ++nf;
        }
        if (std::find(tli.parietal.begin(), tli.parietal.end(), rec.label) != tli.parietal.end()) {
            pa += p.alpha;
            ++np;
        }
    }
    const double inv = 1.0 / static_cast<double>(records.size());
    out.mean.theta *= inv;
    out.mean.alpha *= inv;
    out.mean.beta *= inv;
    out.mean.gamma *= inv;
    out.engagement = engagement_index(out.mean.theta, out.mean.alpha, out.mean.beta);
    if (nf > 0 && np > 0) out.task_load = task_load_index(ft / static_cast<double>(nf), pa / static_cast<double>(np));
    return out;
}

}  // namespace deorbit::analysis
