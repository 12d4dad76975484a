// AArch64 NEON kernels (two doubles per register). Built only on AArch64 targets.

#include <arm_neon.h>

#include <cmath>

#include "backends.hpp"

namespace deorbit::kernels::detail {

namespace {

double sum_neon(const double* x, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0), a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vaddq_f64(a0, vld1q_f64(x + i));
        a1 = vaddq_f64(a1, vld1q_f64(x + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) s += x[i];
    return s;
}

double sum_sq_dev_neon(const double* x, std::size_t n, double mean) {
    const float64x2_t m = vdupq_n_f64(mean);
    float64x2_t a0 = vdupq_n_f64(0.0), a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float64x2_t d0 = vsubq_f64(vld1q_f64(x + i), m);
        const float64x2_t d1 = vsubq_f64(vld1q_f64(x + i + 2), m);
        a0 = vfmaq_f64(a0, d0, d0);
        a1 = vfmaq_f64(a1, d1, d1);
    }
    double s = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        s += d * d;
    }
    return s;
}

void window_detrend_neon(const double* src, const double* w, double mean, double* dst, std::size_t n) {
    const float64x2_t m = vdupq_n_f64(mean);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(dst + i, vmulq_f64(vsubq_f64(vld1q_f64(src + i), m), vld1q_f64(w + i)));
    for (; i < n; ++i) dst[i] = (src[i] - mean) * w[i];
}

void accumulate_power_neon(const double* c, double scale, double* acc, std::size_t bins) {
    const float64x2_t s = vdupq_n_f64(scale);
    std::size_t k = 0;
    for (; k + 2 <= bins; k += 2) {
        const float64x2x2_t v = vld2q_f64(c + 2 * k);  // val[0] = re, val[1] = im
        const float64x2_t p = vfmaq_f64(vmulq_f64(v.val[0], v.val[0]), v.val[1], v.val[1]);
        vst1q_f64(acc + k, vfmaq_f64(vld1q_f64(acc + k), s, p));
    }
    for (; k < bins; ++k) {
        const double re = c[2 * k], im = c[2 * k + 1];
        acc[k] += scale * (re * re + im * im);
    }
}

void adjacent_dot_cross_neon(const double* x, const double* y, const double* z, std::size_t n, double* dot,
                             double* cross) {
    if (n < 2) return;
    const std::size_t pairs = n - 1;
    std::size_t i = 0;
    for (; i + 2 <= pairs; i += 2) {
        const float64x2_t ax = vld1q_f64(x + i), ay = vld1q_f64(y + i), az = vld1q_f64(z + i);
        const float64x2_t bx = vld1q_f64(x + i + 1), by = vld1q_f64(y + i + 1), bz = vld1q_f64(z + i + 1);
        float64x2_t d = vmulq_f64(ax, bx);
        d = vfmaq_f64(d, ay, by);
        d = vfmaq_f64(d, az, bz);
        vst1q_f64(dot + i, d);

        // Plain mul/sub so that parallel inputs give an exactly zero cross product.
        const float64x2_t cx = vsubq_f64(vmulq_f64(ay, bz), vmulq_f64(az, by));
        const float64x2_t cy = vsubq_f64(vmulq_f64(az, bx), vmulq_f64(ax, bz));
        const float64x2_t cz = vsubq_f64(vmulq_f64(ax, by), vmulq_f64(ay, bx));
        float64x2_t c2 = vmulq_f64(cx, cx);
        c2 = vfmaq_f64(c2, cy, cy);
        c2 = vfmaq_f64(c2, cz, cz);
        vst1q_f64(cross + i, vsqrtq_f64(c2));
    }
    for (; i < pairs; ++i) {
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

const KernelTable kNeonTable{
    Backend::Neon,           sum_neon, sum_sq_dev_neon, window_detrend_neon, accumulate_power_neon,
    adjacent_dot_cross_neon,
};

}  // namespace deorbit::kernels::detail
