#include "deorbit/analysis/stats.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "deorbit/errors.hpp"

namespace deorbit::analysis {

double eta_sq_from_F(double F, double df_error, double df_effect) {
    if (!(F >= 0.0)) throw DomainError("F must be non-negative");
    if (!(df_error > 0.0) || !(df_effect > 0.0)) throw DomainError("degrees of freedom must be positive");
    return F * df_effect / (F * df_effect + df_error);
}

namespace {

StatResult make_stat(double ss_eff, double ss_err, double df_err) {
    StatResult r;
    r.df_effect = 1.0;
    r.df_error = df_err;
    r.ss_effect = ss_eff;
    r.ss_error = ss_err;
    if (ss_eff == 0.0) {
        r.F = 0.0;
    } else {
        if (!(ss_err > 0.0)) throw DomainError("F undefined: positive effect with zero error variance");
        r.F = (ss_eff / 1.0) / (ss_err / df_err);
    }
    r.partial_eta_sq = eta_sq_from_F(r.F, df_err);
    return r;
}

struct GroupMoments {
    double mean = 0.0;
    double ss = 0.0;  // sum of squared deviations from the group mean
};

GroupMoments moments(const std::vector<double>& v) {
    GroupMoments m;
    for (double x : v) m.mean += x;
    m.mean /= static_cast<double>(v.size());
    for (double x : v) m.ss += (x - m.mean) * (x - m.mean);
    return m;
}

}  // namespace

Mixed2x2Result anova_mixed_2x2(std::span<const MixedObservation> data) {
    // Each subject reduces to a difference d = a - b (carries every within-subject
    // term) and a sum s = a + b (carries every between-subject term).
    std::vector<double> d[2], s[2];
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& o = data[i];
        if (o.group != 0 && o.group != 1)
            throw DataError("subject " + o.subject + ": group must be 0 or 1");
        if (!std::isfinite(o.a) || !std::isfinite(o.b)) throw DataError("subject " + o.subject + ": missing or non-finite cell");
        d[o.group].push_back(o.a - o.b);
        s[o.group].push_back(o.a + o.b);
    }
    const std::size_t n = d[0].size();
    if (n != d[1].size()) throw DataError("unbalanced design: group sizes " + std::to_string(d[0].size()) + " and " + std::to_string(d[1].size()));
    if (n < 2) throw DataError("each group needs at least two subjects");

    const double nn = static_cast<double>(n);
    const double df_err = 2.0 * nn - 2.0;
    const GroupMoments d0 = moments(d[0]), d1 = moments(d[1]);
    const GroupMoments s0 = moments(s[0]), s1 = moments(s[1]);

    const double dbar = 0.5 * (d0.mean + d1.mean);
    const double ss_within = nn * dbar * dbar;
    const double ss_inter = 0.25 * nn * (d0.mean - d1.mean) * (d0.mean - d1.mean);
    const double ss_err_within = 0.5 * (d0.ss + d1.ss);

    const double ss_between = 0.25 * nn * (s0.mean - s1.mean) * (s0.mean - s1.mean);
    const double ss_err_between = 0.5 * (s0.ss + s1.ss);

    Mixed2x2Result r;
    r.n_per_group = n;
    r.within = make_stat(ss_within, ss_err_within, df_err);
    r.interaction = make_stat(ss_inter, ss_err_within, df_err);
    r.between = make_stat(ss_between, ss_err_between, df_err);
    return r;
}

}  // namespace deorbit::analysis
