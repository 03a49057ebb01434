#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <vector>

#include "adanav/core/error.hpp"
#include "adanav/core/types.hpp"

namespace adanav {

enum class ViewClass : std::uint8_t { Navigable, Extended, Masked };

// Heading-ring index distance. The clamped (non-circular) form matches the
// interval [max(1, i-k), min(i+k, 36)]; the circular form treats the 36-view
// ring as physically closed and is off by default.
inline int view_index_distance(int a, int b, bool circular = false) {
    int d = std::abs(a - b);
    if (circular) d = std::min(d, kViewsPerPanorama - d);
    return d;
}

// Views to process: union over navigable i of indices within distance k.
// Returned sorted ascending; includes the navigable indices themselves.
inline std::vector<int> k_extension(const std::vector<int>& navigable, int k,
                                    bool circular = false) {
    if (navigable.empty()) throw NoNavigableViews("k_extension: empty navigable set");
    if (k < 0) throw RangeError("k_extension: k must be >= 0");
    std::array<bool, kViewsPerPanorama + 1> in{};
    for (int i : navigable) {
        if (i < 1 || i > kViewsPerPanorama)
            throw RangeError("k_extension: navigable index out of 1..36");
        if (circular) {
            for (int d = -k; d <= k; ++d) {
                int j = ((i - 1 + d) % kViewsPerPanorama + kViewsPerPanorama) %
                            kViewsPerPanorama + 1;
                in[j] = true;
            }
        } else {
            int lo = std::max(1, i - k);
            int hi = std::min(i + k, kViewsPerPanorama);
            for (int j = lo; j <= hi; ++j) in[j] = true;
        }
    }
    std::vector<int> out;
    for (int j = 1; j <= kViewsPerPanorama; ++j)
        if (in[j]) out.push_back(j);
    return out;
}

struct RankResult {
    int rank;     // index distance |j - i| to the closest navigable view
    int closest;  // that navigable index; ties resolved to the smaller index
};

inline RankResult rank(int j, const std::vector<int>& navigable, bool circular = false) {
    if (navigable.empty()) throw NoNavigableViews("rank: empty navigable set");
    int best_i = 0;
    int best_d = kViewsPerPanorama + 1;
    for (int i : navigable) {
        int d = view_index_distance(j, i, circular);
        if (d < best_d || (d == best_d && i < best_i)) {
            best_d = d;
            best_i = i;
        }
    }
    return {best_d, best_i};
}

// Total classification of indices 1..36 into NAVIGABLE / EXTENDED(rank) / MASKED.
struct SelectionPlan {
    struct Entry {
        ViewClass cls = ViewClass::Masked;
        int rank = 0;  // meaningful for Extended only; 0 for Navigable
    };

    std::array<Entry, kViewsPerPanorama + 1> entries{};  // 1-based
    std::vector<int> navigable;
    int k = 0;

    const Entry& at(int index_1based) const { return entries[index_1based]; }

    int count(ViewClass c) const {
        int n = 0;
        for (int j = 1; j <= kViewsPerPanorama; ++j)
            if (entries[j].cls == c) ++n;
        return n;
    }
};

inline SelectionPlan build_plan(const std::vector<int>& navigable, int k,
                                bool circular = false) {
    SelectionPlan plan;
    plan.navigable = navigable;
    plan.k = k;
    auto processed = k_extension(navigable, k, circular);
    std::array<bool, kViewsPerPanorama + 1> nav{};
    for (int i : navigable) nav[i] = true;
    for (int j : processed) {
        if (nav[j]) {
            plan.entries[j] = {ViewClass::Navigable, 0};
        } else {
            plan.entries[j] = {ViewClass::Extended, rank(j, navigable, circular).rank};
        }
    }
    return plan;
}

}  // namespace adanav
