// Scalar reference kernels. These define the semantics the vector variants are tested against.

#include <cmath>

#include "backends.hpp"

namespace deorbit::kernels::detail {

namespace {

double sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double sum_sq_dev_scalar(const double* x, std::size_t n, double mean) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        s += d * d;
    }
    return s;
}

void window_detrend_scalar(const double* src, const double* w, double mean, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = (src[i] - mean) * w[i];
}

void accumulate_power_scalar(const double* c, double scale, double* acc, std::size_t bins) {
    for (std::size_t k = 0; k < bins; ++k) {
        const double re = c[2 * k], im = c[2 * k + 1];
        acc[k] += scale * (re * re + im * im);
    }
}

void adjacent_dot_cross_scalar(const double* x, const double* y, const double* z, std::size_t n, double* dot,
                               double* cross) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double ax = x[i], ay = y[i], az = z[i];
        const double bx = x[i + 1], by = y[i + 1], bz = z[i + 1];
        dot[i] = ax * bx + ay * by + az * bz;
        const double cx = ay * bz - az * by;
        const double cy = az * bx - ax * bz;
        const double cz = ax * by - ay * bx;
        cross[i] = std::sqrt(cx * cx + cy * cy + cz * cz);
    }
}

}  // namespace

const KernelTable kScalarTable{
    Backend::Scalar,           sum_scalar, sum_sq_dev_scalar, window_detrend_scalar, accumulate_power_scalar,
    adjacent_dot_cross_scalar,
};

}  // namespace deorbit::kernels::detail
