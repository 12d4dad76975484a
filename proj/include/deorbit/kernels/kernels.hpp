#pragma once

// Data-parallel inner loops of the analysis pipeline. Each kernel has a
// scalar reference implementation and vector variants (AVX2+FMA on x86-64,
// NEON on AArch64) chosen at runtime from the host CPU's capabilities.
// Vector variants agree with the scalar reference to rounding: elementwise
// kernels within a few ulps, reductions within a relative 1e-12 of the
// magnitude summed.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace deorbit::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view to_string(Backend b);

struct KernelTable {
    Backend backend;

    /// Sum of x[0..n).
    double (*sum)(const double* x, std::size_t n);
    /// Sum of (x[i] - mean)^2.
    double (*sum_sq_dev)(const double* x, std::size_t n, double mean);
    /// dst[i] = (src[i] - mean) * w[i].
    void (*window_detrend)(const double* src, const double* w, double mean, double* dst, std::size_t n);
    /// acc[k] += scale * (re^2 + im^2) over interleaved complex bins c[2k], c[2k+1].
    void (*accumulate_power)(const double* c, double scale, double* acc, std::size_t bins);
    /// For unit vectors d_i = (x[i], y[i], z[i]): dot[i] = d_i . d_{i+1} and
    /// cross[i] = |d_i x d_{i+1}|, for i in [0, n-1).
    void (*adjacent_dot_cross)(const double* x, const double* y, const double* z, std::size_t n, double* dot,
                               double* cross);
};

/// True when the backend is compiled in and supported by this CPU.
bool available(Backend b);

/// Table for a specific backend. Throws std::invalid_argument when unavailable.
const KernelTable& table(Backend b);

/// Best backend for this CPU.
Backend detect_best();

/// Table used by the analysis functions (detect_best() unless overridden).
const KernelTable& active();

/// Overrides the active backend for the whole process.
void select(Backend b);

std::vector<Backend> available_backends();

// Convenience wrappers over active().
double sum(std::span<const double> x);
double mean(std::span<const double> x);
double sum_sq_dev(std::span<const double> x, double mean);

}  // namespace deorbit::kernels
