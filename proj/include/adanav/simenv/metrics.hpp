#pragma once

#include <algorithm>
#include <vector>

#include "adanav/core/error.hpp"

namespace adanav {

struct EpisodeSpec {
    int start = 0;
    int goal = 0;
    double shortest_path_m = 0.0;   // geodesic start -> goal
    double success_radius = 3.0;
    int step_limit = 15;
};

// Pure inputs for metric computation; distances in meters. Euclidean
// distances drive the success radius, geodesic distances drive SPL and GP.
struct EpisodeMetricInputs {
    double tl = 0.0;
    bool stopped = false;
    double min_visited_euclid_to_goal = 0.0;
    double final_euclid_to_goal = 0.0;
    double geo_start_to_goal = 0.0;
    double geo_final_to_goal = 0.0;
    double success_radius = 3.0;
};

struct EpisodeMetrics {
    double tl = 0.0;
    double osr = 0.0;
    double sr = 0.0;
    double spl = 0.0;
    double gp = 0.0;
};

struct MetricsReport {
    std::vector<EpisodeMetrics> per_episode;
    EpisodeMetrics aggregate;
};

inline EpisodeMetrics episode_metrics(const EpisodeMetricInputs& in) {
    EpisodeMetrics m;
    m.tl = in.tl;
    m.osr = in.min_visited_euclid_to_goal <= in.success_radius ? 1.0 : 0.0;
    m.sr = (in.stopped && in.final_euclid_to_goal <= in.success_radius) ? 1.0 : 0.0;
    double denom = std::max(in.tl, in.geo_start_to_goal);
    m.spl = denom > 0.0 ? m.sr * in.geo_start_to_goal / denom : m.sr;
    m.gp = in.geo_start_to_goal - in.geo_final_to_goal;
    return m;
}

inline MetricsReport compute_metrics(const std::vector<EpisodeMetricInputs>& episodes) {
    if (episodes.empty()) throw EmptySample("compute_metrics: no episodes");
    MetricsReport report;
    for (const auto& in : episodes) {
        report.per_episode.push_back(episode_metrics(in));
        const auto& m = report.per_episode.back();
        report.aggregate.tl += m.tl;
        report.aggregate.osr += m.osr;
        report.aggregate.sr += m.sr;
        report.aggregate.spl += m.spl;
        report.aggregate.gp += m.gp;
    }
    const double n = static_cast<double>(episodes.size());
    report.aggregate.tl /= n;
    report.aggregate.osr /= n;
    report.aggregate.sr /= n;
    report.aggregate.spl /= n;
    report.aggregate.gp /= n;
    return report;
}

}  // namespace adanav
