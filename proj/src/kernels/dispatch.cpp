#include <atomic>
#include <stdexcept>
#include <string>

#include "backends.hpp"

namespace deorbit::kernels {

namespace {

bool cpu_has_avx2_fma() {
#if defined(DEORBIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::atomic<const KernelTable*>& active_slot() {
    static std::atomic<const KernelTable*> slot{&table(detect_best())};
    return slot;
}

}  // namespace

std::string_view to_string(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "scalar";
}

bool available(Backend b) {
    switch (b) {
        case Backend::Scalar: return true;
        case Backend::Avx2: {
            static const bool ok = cpu_has_avx2_fma();
            return ok;
        }
        case Backend::Neon:
#if defined(DEORBIT_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Backend b) {
    if (!available(b)) throw std::invalid_argument("kernel backend '" + std::string(to_string(b)) + "' unavailable");
    switch (b) {
#if defined(DEORBIT_HAVE_AVX2)
        case Backend::Avx2: return detail::kAvx2Table;
#endif
#if defined(DEORBIT_HAVE_NEON)
        case Backend::Neon: return detail::kNeonTable;
#endif
        default: return detail::kScalarTable;
    }
}

Backend detect_best() {
    if (available(Backend::Avx2)) return Backend::Avx2;
    if (available(Backend::Neon)) return Backend::Neon;
    return Backend::Scalar;
}

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

void select(Backend b) { active_slot().store(&table(b), std::memory_order_release); }

std::vector<Backend> available_backends() {
    std::vector<Backend> out;
    for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon})
        if (available(b)) out.push_back(b);
    return out;
}

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

double mean(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean of empty range");
    return sum(x) / static_cast<double>(x.size());
}

double sum_sq_dev(std::span<const double> x, double m) { return active().sum_sq_dev(x.data(), x.size(), m); }

}  // namespace deorbit::kernels
