// AVX2 + FMA kernels. This translation unit is the only one compiled with -mavx2 -mfma;
// callers reach it through the dispatch table after a CPUID check.

#include <immintrin.h>

#include <cmath>

#include "backends.hpp"

namespace deorbit::kernels::detail {

namespace {

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
        a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) s += x[i];
    return s;
}

double sum_sq_dev_avx2(const double* x, std::size_t n, double mean) {
    const __m256d m = _mm256_set1_pd(mean);
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), m);
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x + i + 4), m);
        a0 = _mm256_fmadd_pd(d0, d0, a0);
        a1 = _mm256_fmadd_pd(d1, d1, a1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), m);
        a0 = _mm256_fmadd_pd(d, d, a0);
    }
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        s += d * d;
    }
    return s;
}

void window_detrend_avx2(const double* src, const double* w, double mean, double* dst, std::size_t n) {
    const __m256d m = _mm256_set1_pd(mean);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(src + i), m);
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(d, _mm256_loadu_pd(w + i)));
    }
    for (; i < n; ++i) dst[i] = (src[i] - mean) * w[i];
}

void accumulate_power_avx2(const double* c, double scale, double* acc, std::size_t bins) {
    const __m256d s = _mm256_set1_pd(scale);
    std::size_t k = 0;
    for (; k + 4 <= bins; k += 4) {
        const __m256d a = _mm256_loadu_pd(c + 2 * k);      // re0 im0 re1 im1
        const __m256d b = _mm256_loadu_pd(c + 2 * k + 4);  // re2 im2 re3 im3
        // hadd works per 128-bit lane: |c0|^2 |c2|^2 |c1|^2 |c3|^2
        const __m256d p = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
        const __m256d ordered = _mm256_permute4x64_pd(p, 0b11011000);
        _mm256_storeu_pd(acc + k, _mm256_fmadd_pd(s, ordered, _mm256_loadu_pd(acc + k)));
    }
    for (; k < bins; ++k) {
        const double re = c[2 * k], im = c[2 * k + 1];
        acc[k] += scale * (re * re + im * im);
    }
}

void adjacent_dot_cross_avx2(const double* x, const double* y, const double* z, std::size_t n, double* dot,
                             double* cross) {
    if (n < 2) return;
    const std::size_t pairs = n - 1;
    std::size_t i = 0;
    for (; i + 4 <= pairs; i += 4) {
        const __m256d ax = _mm256_loadu_pd(x + i), ay = _mm256_loadu_pd(y + i), az = _mm256_loadu_pd(z + i);
        const __m256d bx = _mm256_loadu_pd(x + i + 1), by = _mm256_loadu_pd(y + i + 1),
                      bz = _mm256_loadu_pd(z + i + 1);
        __m256d d = _mm256_mul_pd(ax, bx);
        d = _mm256_fmadd_pd(ay, by, d);
        d = _mm256_fmadd_pd(az, bz, d);
        _mm256_storeu_pd(dot + i, d);

        // Plain mul/sub so that parallel inputs give an exactly zero cross product.
        const __m256d cx = _mm256_sub_pd(_mm256_mul_pd(ay, bz), _mm256_mul_pd(az, by));
        const __m256d cy = _mm256_sub_pd(_mm256_mul_pd(az, bx), _mm256_mul_pd(ax, bz));
        const __m256d cz = _mm256_sub_pd(_mm256_mul_pd(ax, by), _mm256_mul_pd(ay, bx));
        __m256d c2 = _mm256_mul_pd(cx, cx);
        c2 = _mm256_fmadd_pd(cy, cy, c2);
        c2 = _mm256_fmadd_pd(cz, cz, c2);
        _mm256_storeu_pd(cross + i, _mm256_sqrt_pd(c2));
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

const KernelTable kAvx2Table{
    Backend::Avx2,           sum_avx2, sum_sq_dev_avx2, window_detrend_avx2, accumulate_power_avx2,
    adjacent_dot_cross_avx2,
};

}  // namespace deorbit::kernels::detail
