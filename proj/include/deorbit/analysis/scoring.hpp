#pragma once

// Questionnaire scoring. Ratings outside their declared range raise ValidationError.

#include <array>

namespace deorbit::analysis {

/// NASA-TLX subscales, each 0..100, in the order mental, physical, temporal,
/// performance, effort, frustration.
using TlxSheet = std::array<double, 6>;

/// SUS items 1..10, each 1..5.
using SusSheet = std::array<double, 10>;

/// Raw (unweighted) TLX: mean of the six subscales.
double tlx_score(const TlxSheet& sheet);

/// Standard SUS: odd items contribute x-1, even items 5-x; the sum is scaled by 2.5.
double sus_score(const SusSheet& items);

}  // namespace deorbit::analysis
