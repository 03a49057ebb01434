#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "adanav/core/median_filter.hpp"
#include "adanav/pipeline/process.hpp"
#include "adanav/simenv/corrupt.hpp"
#include "adanav/simenv/env.hpp"
#include "adanav/simenv/metrics.hpp"
#include "adanav/simenv/policy.hpp"

namespace adanav {

struct CorruptionConfig {
    CorruptionKind kind = CorruptionKind::Speckle;
    int severity = 3;
};

// Everything that shapes how the agent processes observations and acts.
struct AgentConfig {
    EncoderConfig encoder = EncoderConfig::desk();   // executed
    EncoderConfig cost_profile = EncoderConfig::vit_b16();  // costed
    int k = 4;
    ThresholdPolicy policy{};
    bool circular_extension = false;

    bool cache_enabled = true;
    int cache_bits = 10;
    double cache_similarity_threshold = 0.85;
    std::size_t cache_max_pairs = 0;  // 0 = unbounded

    bool scan_mode = false;
    double scan_clearance_deg = 8.0;
    double scan_min_depth = 1.5;

    std::optional<CorruptionConfig> corruption;
    int median_filter_kernel = 0;  // 0 = off

    double stop_threshold = 0.85;
    Seed run_seed{1};
};

struct StepLog {
    int node = 0;
    Action action;
    std::array<int, 4> disposition_counts{};
    StepCost cost;
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_misses = 0;
    bool scan_empty = false;
};

struct Episode {
    EpisodeSpec spec;
    std::vector<int> trajectory;  // node ids, starting with spec.start
    std::vector<StepLog> steps;
    bool stopped = false;
    bool forced_stop = false;     // step limit reached without a STOP decision
    bool scan_halt = false;       // scan-only mode found no opening
    CostLedger ledger;
    CacheStats cache_stats;
    EpisodeMetricInputs metric_inputs;
};

namespace detail {

inline ViewImage observe_view(const EnvGraph& env, int node, int view_1based,
                              const AgentConfig& agent, const SeededStream& corrupt_base,
                              int step_index) {
    ViewImage img = render_view(env.latents[node][view_1based - 1], agent.encoder.image_side);
    if (agent.corruption) {
        Seed s = corrupt_base
                     .fork("view", static_cast<std::uint64_t>(step_index) *
                                           (kViewsPerPanorama + 1) + view_1based)
                     .base_seed();
        img = corrupt(img, agent.corruption->kind, agent.corruption->severity, s);
    }
    if (agent.median_filter_kernel > 0) img = median_filter(img, agent.median_filter_kernel);
    return img;
}

// Scan-mode moves snap the predicted view to the nearest true navigable slot.
inline int snap_to_navigable(int view, const std::vector<int>& navigable) {
    int best = navigable.front();
    int best_d = kViewsPerPanorama + 1;
    for (int idx : navigable) {
        int d = view_index_distance(view, idx, /*circular=*/true);
        if (d < best_d) {
            best_d = d;
            best = idx;
        }
    }
    return best;
}

}  // namespace detail

// Runs {observe -> process_panorama -> greedy action -> move} until STOP or
// the step limit. The goal "instruction" is the clean full-encoder embedding
// of the goal node's identity view; it stands in for instruction encoding and
// is not charged to the ledger.
inline Episode run_episode(const EnvGraph& env, const EpisodeSpec& spec,
                           const AgentConfig& agent, const Encoder& encoder,
                           std::uint64_t episode_index = 0) {
    if (spec.start < 0 || spec.start >= env.node_count || spec.goal < 0 ||
        spec.goal >= env.node_count)
        throw InvalidEpisode("run_episode: start/goal out of range");

    std::vector<double> geo_from_goal = env.shortest_from(spec.goal);
    if (!std::isfinite(geo_from_goal[spec.start]))
        throw InvalidEpisode("run_episode: start and goal are disconnected");

    Episode ep;
    ep.spec = spec;

    // The goal view is clean (it stands in for the instruction) but passes
    // through the same deterministic preprocessing as observations, so the
    // stop rule compares similarities on a common scale.
    ViewImage goal_view = render_view(env.identity[spec.goal], agent.encoder.image_side);
    if (agent.median_filter_kernel > 0)
        goal_view = median_filter(goal_view, agent.median_filter_kernel);
    const Embedding goal_embedding = encoder.encode_full(goal_view).first;

    SeededStream run_stream(agent.run_seed);
    CacheTable table(
        HashFamily::draw(agent.cache_bits,
                         static_cast<std::int64_t>(3) * agent.encoder.image_side *
                             agent.encoder.image_side,
                         run_stream.fork("hash", episode_index)),
        agent.cache_similarity_threshold, agent.cache_max_pairs);
    CacheTable* table_ptr = agent.cache_enabled ? &table : nullptr;

    SeededStream corrupt_base = run_stream.fork("corrupt", episode_index);

    int node = spec.start;
    int prev_node = -1;
    std::vector<bool> visited(env.node_count, false);
    visited[node] = true;
    ep.trajectory.push_back(node);
    double tl = 0.0;
    double min_goal_dist = env.euclid(node, spec.goal);

    for (int t = 1; t <= spec.step_limit; ++t) {
        // Observation
        Panorama pano;
        pano.views.reserve(kViewsPerPanorama);
        for (int j = 1; j <= kViewsPerPanorama; ++j)
            pano.views.push_back(detail::observe_view(env, node, j, agent, corrupt_base, t));

        if (agent.scan_mode) {
            SubgoalSet pred = scan_to_subgoals(synthesize_scan(env, node),
                                               agent.scan_clearance_deg, agent.scan_min_depth);
            if (pred.empty()) {
                // No detected opening: the agent halts in place.
                ep.scan_halt = true;
                ep.stopped = true;
                StepLog log;
                log.node = node;
                log.scan_empty = true;
                ep.steps.push_back(log);
                break;
            }
            pano.navigable = pred.indices;
            std::sort(pano.navigable.begin(), pano.navigable.end());
        } else {
            pano.navigable = env.nodes[node].navigable;
        }

        StepOutput out = process_panorama(pano, encoder, CostModel::from(agent.cost_profile),
                                          agent.policy, table_ptr, agent.k, agent.scan_mode,
                                          agent.circular_extension);
        ep.ledger.add_step(out.cost);

        Action act = greedy_policy(out.embeddings, goal_embedding, pano.navigable,
                                   agent.stop_threshold);

        // History-aware move preference, standing in for the history encoders
        // of the replaced agents: a deterministic greedy walker with no memory
        // loops forever in flat-gradient regions. The stop decision above is
        // always taken on the full navigable set; only the move is filtered,
        // preferring unvisited nodes, then anything but an immediate backtrack.
        if (!act.stop) {
            auto filtered_move = [&](auto&& keep) -> bool {
                std::vector<int> kept;
                for (int idx : pano.navigable)
                    if (keep(env.nodes[node].neighbor_for_view[idx])) kept.push_back(idx);
                if (kept.empty()) return false;
                Action alt = greedy_policy(out.embeddings, goal_embedding, kept,
                                           agent.stop_threshold);
                alt.stop = false;  // a subset maximum cannot newly clear the stop bar
                act = alt;
                return true;
            };
            if (!filtered_move([&](int target) { return target >= 0 && !visited[target]; }))
                filtered_move([&](int target) { return target != prev_node; });
        }

        StepLog log;
        log.node = node;
        log.action = act;
        log.disposition_counts = out.disposition_counts();
        log.cost = out.cost;
        log.cache_hits = out.cache_hits;
        log.cache_misses = out.cache_misses;
        ep.steps.push_back(log);

        if (act.stop) {
            ep.stopped = true;
            break;
        }

        int chosen_view = act.view_index;
        int next = env.nodes[node].neighbor_for_view[chosen_view];
        if (next < 0) {
            // Scan-mode prediction without an exact edge: snap to the closest
            // true navigable heading.
            int snapped = detail::snap_to_navigable(chosen_view, env.nodes[node].navigable);
            next = env.nodes[node].neighbor_for_view[snapped];
        }
        tl += env.edge_length(node, next);
        prev_node = node;
        node = next;
        visited[node] = true;
        ep.trajectory.push_back(node);
        min_goal_dist = std::min(min_goal_dist, env.euclid(node, spec.goal));
    }

    if (!ep.stopped) {
        ep.forced_stop = true;  // step limit reached; episode terminates
        ep.stopped = true;
    }
    if (agent.cache_enabled) ep.cache_stats = table.stats();

    ep.metric_inputs.tl = tl;
    ep.metric_inputs.stopped = ep.stopped;
    ep.metric_inputs.min_visited_euclid_to_goal = min_goal_dist;
    ep.metric_inputs.final_euclid_to_goal = env.euclid(node, spec.goal);
    ep.metric_inputs.geo_start_to_goal = geo_from_goal[spec.start];
    ep.metric_inputs.geo_final_to_goal = geo_from_goal[node];
    ep.metric_inputs.success_radius = spec.success_radius;
    return ep;
}

}  // namespace adanav
