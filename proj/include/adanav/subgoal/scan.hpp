#pragma once

#include <cmath>
#include <vector>

#include "adanav/core/error.hpp"
#include "adanav/core/types.hpp"

namespace adanav {

// Polar laser occupancy scan: bin b (1-based) covers degrees [b-1, b).
struct OccupancyScan {
    static constexpr int kBins = 360;

    std::vector<double> readings;  // meters, in (0, max_range]
    double max_range = 10.0;

    void validate() const {
        if (readings.size() != kBins) throw ShapeError("OccupancyScan: expected 360 bins");
        if (max_range <= 0.0) throw RangeError("OccupancyScan: max_range must be > 0");
        for (double r : readings)
            if (!(r > 0.0 && r <= max_range))
                throw RangeError("OccupancyScan: readings must lie in (0, max_range]");
    }
};

// Candidate navigable view indices with normalized confidence weights.
struct SubgoalSet {
    std::vector<int> indices;      // unique, subset of 1..36
    std::vector<double> weights;   // >= 0, summing to 1 when non-empty

    bool empty() const { return indices.empty(); }
};

// Maps a heading in [0, 360) to its view index; view i covers ((i-1)*10, i*10].
inline int view_index_for_heading(double heading_deg) {
    double h = std::fmod(heading_deg, 360.0);
    if (h < 0.0) h += 360.0;
    int idx = static_cast<int>(std::ceil(h / kDegreesPerView));
    if (idx == 0) idx = kViewsPerPanorama;  // heading exactly 0 wraps to view 36
    return idx;
}

inline double view_center_heading(int index_1based) {
    return index_1based * kDegreesPerView - kDegreesPerView / 2.0;
}

// Free-sector detection: maximal contiguous (circular) runs of bins with
// reading >= min_depth and angular width >= clearance_deg become subgoals at
// their midpoint headings, weighted by run width. A fully open scan has no
// distinguished run boundary and yields all 36 views uniformly.
inline SubgoalSet scan_to_subgoals(const OccupancyScan& scan, double clearance_deg,
                                   double min_depth) {
    scan.validate();
    const int n = OccupancyScan::kBins;
    std::vector<bool> open(n);
    int open_count = 0;
    for (int b = 0; b < n; ++b) {
        open[b] = scan.readings[b] >= min_depth;
        if (open[b]) ++open_count;
    }

    SubgoalSet out;
    if (open_count == 0) return out;
    if (open_count == n) {
        out.indices.resize(kViewsPerPanorama);
        out.weights.assign(kViewsPerPanorama, 1.0 / kViewsPerPanorama);
        for (int i = 0; i < kViewsPerPanorama; ++i) out.indices[i] = i + 1;
        return out;
    }

    // Start after a closed bin so circular runs are not split at bin 1.
    int anchor = 0;
    while (open[anchor]) ++anchor;

    std::vector<std::pair<int, int>> runs;  // (start bin 0-based, width in bins)
    int run_start = -1;
    for (int step = 1; step <= n; ++step) {
        int b = (anchor + step) % n;
        if (open[b]) {
            if (run_start < 0) run_start = b;
        } else if (run_start >= 0) {
            int width = (b - run_start + n) % n;
            runs.emplace_back(run_start, width);
            run_start = -1;
        }
    }

    double total_width = 0.0;
    std::vector<std::pair<int, double>> picks;  // (view index, width)
    for (auto [start, width] : runs) {
        if (width < clearance_deg) continue;
        double mid = std::fmod(start + width / 2.0, 360.0);
        picks.emplace_back(view_index_for_heading(mid), static_cast<double>(width));
        total_width += width;
    }
    if (picks.empty()) return out;

    // Merge runs that land in the same view sector.
    for (auto [idx, w] : picks) {
        bool merged = false;
        for (std::size_t i = 0; i < out.indices.size(); ++i) {
            if (out.indices[i] == idx) {
                out.weights[i] += w / total_width;
                merged = true;
                break;
            }
        }
        if (!merged) {
            out.indices.push_back(idx);
            out.weights.push_back(w / total_width);
        }
    }
    return out;
}

}  // namespace adanav
