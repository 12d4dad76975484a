#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace deorbit::analysis {

struct StatResult {
    double F = 0.0;
    double df_effect = 1.0;
    double df_error = 0.0;
    double partial_eta_sq = 0.0;
    double ss_effect = 0.0;
    double ss_error = 0.0;
};

/// Partial eta squared from an F ratio: F*df1 / (F*df1 + df2).
double eta_sq_from_F(double F, double df_error, double df_effect = 1.0);

/// One subject of a 2 (between: group) x 2 (within: condition) design.
struct MixedObservation {
    std::string subject;
    int group = 0;     // 0 or 1
    double a = 0.0;    // condition A (e.g. bottom view)
    double b = 0.0;    // condition B (e.g. front view)
};

struct Mixed2x2Result {
    StatResult within;       // condition main effect
    StatResult between;      // group main effect
    StatResult interaction;  // group x condition
    std::size_t n_per_group = 0;
};

/// Sums-of-squares mixed ANOVA. Requires equal group sizes of at least two
/// subjects and finite values (DataError otherwise). An effect with zero sum
/// of squares reports F = 0; a positive effect over zero error is a DomainError.
Mixed2x2Result anova_mixed_2x2(std::span<const MixedObservation> data);

}  // namespace deorbit::analysis
