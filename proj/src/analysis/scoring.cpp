#include "deorbit/analysis/scoring.hpp"

#include <cmath>
#include <string>

#include "deorbit/errors.hpp"

namespace deorbit::analysis {

namespace {

void check_range(double v, double lo, double hi, const char* what, std::size_t i) {
    if (!std::isfinite(v) || v < lo || v > hi)
        throw ValidationError(std::string(what) + " item " + std::to_string(i + 1) + " = " + std::to_string(v) +
                              " outside [" + std::to_string(static_cast<int>(lo)) + ", " +
                              std::to_string(static_cast<int>(hi)) + "]");
}

}  // namespace

double tlx_score(const TlxSheet& sheet) {
    double s = 0.0;
    for (std::size_t i = 0; i < sheet.size(); ++i) {
        check_range(sheet[i], 0.0, 100.0, "TLX", i);
        s += sheet[i];
    }
    return s / 6.0;
}

double sus_score(const SusSheet& items) {
    double s = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        check_range(items[i], 1.0, 5.0, "SUS", i);
        // Items are numbered from 1, so index 0 is the first (odd, positively worded) item.
        s += (i % 2 == 0) ? items[i] - 1.0 : 5.0 - items[i];
    }
    return s * 2.5;
}

}  // namespace deorbit::analysis
