#pragma once

#include <vector>

#include "adanav/core/error.hpp"
#include "adanav/core/similarity.hpp"
#include "adanav/core/types.hpp"

namespace adanav {

struct Action {
    bool stop = false;
    int view_index = 0;        // chosen navigable view (also set when stopping)
    double goal_similarity = -2.0;
};

// Greedy goal-similarity policy over the navigable embeddings: pick the
// navigable view most similar to the goal embedding (ties to the lowest
// index); issue STOP when that similarity strictly exceeds stop_threshold.
inline Action greedy_policy(const std::vector<Embedding>& embeddings,
                            const Embedding& goal, const std::vector<int>& navigable,
                            double stop_threshold) {
    if (navigable.empty()) throw NoNavigableViews("greedy_policy: empty navigable set");
    Action act;
    bool any = false;
    for (int idx : navigable) {
        const Embedding& e = embeddings[idx - 1];
        if (e.is_masked()) continue;
        double s = cosine_similarity(e, goal);
        if (!any || s > act.goal_similarity) {
            act.goal_similarity = s;
            act.view_index = idx;
            any = true;
        }
    }
    if (!any)
        throw PolicyDegenerate("greedy_policy: all navigable embeddings are masked");
    act.stop = act.goal_similarity > stop_threshold;
    return act;
}

}  // namespace adanav
