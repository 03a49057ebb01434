#pragma once

#include <cmath>
#include <map>

#include "adanav/core/error.hpp"
#include "adanav/spatial/selection.hpp"

namespace adanav {

// Rank-decayed early-exit threshold schedule: raw = T0 * exp(-A * R), rounded
// to round_decimals (half away from zero); a rounded value at or above
// full_compute_cutoff collapses to 1.0, i.e. full compute.
struct ThresholdPolicy {
    double t0 = 1.0;
    double aggressiveness = 9e-4;
    int round_decimals = 3;
    double full_compute_cutoff = 0.998;

    void validate() const {
        if (!(t0 > 0.0 && t0 <= 1.0)) throw ConfigError("ThresholdPolicy: T0 must be in (0,1]");
        if (aggressiveness < 0.0) throw ConfigError("ThresholdPolicy: A must be >= 0");
        if (round_decimals < 0) throw ConfigError("ThresholdPolicy: round_decimals must be >= 0");
        if (!(full_compute_cutoff > 0.0 && full_compute_cutoff <= 1.0))
            throw ConfigError("ThresholdPolicy: cutoff must be in (0,1]");
    }
};

inline double round_half_away(double x, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::round(x * scale) / scale;
}

// Rank-0 views are navigable and bypass thresholds entirely; asking for their
// threshold is a caller bug.
inline double threshold_for_rank(int rank, const ThresholdPolicy& policy) {
    policy.validate();
    if (rank < 1)
        throw NavigableNeedsNoThreshold("threshold_for_rank: rank must be >= 1");
    double raw = policy.t0 * std::exp(-policy.aggressiveness * rank);
    double rounded = round_half_away(raw, policy.round_decimals);
    if (rounded >= policy.full_compute_cutoff) return 1.0;
    return rounded;
}

// Threshold map defined exactly on the plan's EXTENDED indices.
inline std::map<int, double> schedule_for_plan(const SelectionPlan& plan,
                                               const ThresholdPolicy& policy) {
    std::map<int, double> out;
    for (int j = 1; j <= kViewsPerPanorama; ++j) {
        if (plan.at(j).cls == ViewClass::Extended)
            out[j] = threshold_for_rank(plan.at(j).rank, policy);
    }
    return out;
}

}  // namespace adanav
