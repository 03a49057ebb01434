#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "adanav/adaptive/threshold.hpp"
#include "adanav/cache/lsh_cache.hpp"
#include "adanav/encoder/encoder.hpp"
#include "adanav/flops/ledger.hpp"
#include "adanav/spatial/selection.hpp"

namespace adanav {

enum class Disposition : std::uint8_t { Full, Exited, Cached, Masked };

struct ViewOutcome {
    Disposition disposition = Disposition::Masked;
    int exit_layer = 0;  // meaningful for Exited
};

// Result of processing one panorama: 36 embeddings (zero sentinel for masked
// views), one disposition per view, and the step's cost breakdown.
struct StepOutput {
    std::vector<Embedding> embeddings;                       // 36, index i at [i-1]
    std::array<ViewOutcome, kViewsPerPanorama + 1> outcomes{};  // 1-based
    StepCost cost;
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_misses = 0;

    std::array<int, 4> disposition_counts() const {
        std::array<int, 4> n{};
        for (int j = 1; j <= kViewsPerPanorama; ++j)
            ++n[static_cast<int>(outcomes[j].disposition)];
        return n;
    }
};

// Algorithm-1 step: navigable views are fully processed; extended views are
// served from the cache or early-exited (batched) and inserted; everything
// else is the zero sentinel. Pass table = nullptr to disable caching.
inline StepOutput process_panorama(const Panorama& pano, const Encoder& encoder,
                                   const CostModel& cost_profile,
                                   const ThresholdPolicy& policy, CacheTable* table, int k,
                                   bool scan_mode = false, bool circular = false) {
    if (pano.views.size() != static_cast<std::size_t>(kViewsPerPanorama))
        throw ShapeError("process_panorama: panorama must hold 36 views");
    if (pano.navigable.empty())
        throw NoNavigableViews("process_panorama: no navigable views");

    const int dim = encoder.config().hidden;
    SelectionPlan plan = build_plan(pano.navigable, k, circular);

    StepOutput out;
    out.embeddings.assign(kViewsPerPanorama, Embedding::zeros(dim));

    const std::uint64_t hash_ops_before = table ? table->stats().hash_ops : 0;
    const std::uint64_t hits_before = table ? table->stats().hits : 0;
    const std::uint64_t misses_before = table ? table->stats().misses : 0;

    std::vector<int> miss_indices;
    std::vector<ViewImage> miss_views;
    std::vector<double> miss_thresholds;

    for (int j = 1; j <= kViewsPerPanorama; ++j) {
        const auto& entry = plan.at(j);
        switch (entry.cls) {
            case ViewClass::Navigable: {
                auto [emb, trace] = encoder.encode_full(pano.view(j));
                out.embeddings[j - 1] = std::move(emb);
                out.outcomes[j] = {Disposition::Full, encoder.config().layers};
                break;
            }
            case ViewClass::Extended: {
                if (table) {
                    if (auto cached = table->find_similar(pano.view(j))) {
                        out.embeddings[j - 1] = std::move(*cached);
                        out.outcomes[j] = {Disposition::Cached, 0};
                        break;
                    }
                }
                miss_indices.push_back(j);
                miss_views.push_back(pano.view(j));
                miss_thresholds.push_back(threshold_for_rank(entry.rank, policy));
                break;
            }
            case ViewClass::Masked:
                out.outcomes[j] = {Disposition::Masked, 0};
                break;
        }
    }

    std::vector<std::pair<int, int>> miss_exits;
    if (!miss_indices.empty()) {
        BatchResult batch = encoder.encode_batch_budgeted(miss_views, miss_thresholds);
        for (std::size_t i = 0; i < miss_indices.size(); ++i) {
            const int j = miss_indices[i];
            ExitRecord& rec = batch.records[i];
            if (table) table->insert(miss_views[i], rec.embedding);
            out.embeddings[j - 1] = std::move(rec.embedding);
            out.outcomes[j] = {Disposition::Exited, rec.exit_layer};
            miss_exits.emplace_back(j, rec.exit_layer);
        }
    }

    CacheEvents events;
    if (table) {
        events.hash_ops = table->stats().hash_ops - hash_ops_before;
        events.hits = table->stats().hits - hits_before;
        events.misses = table->stats().misses - misses_before;
        events.hyperplanes = table->hash_bits();
    }
    out.cache_hits = events.hits;
    out.cache_misses = events.misses;
    out.cost = ledger_step(plan, miss_exits, events, cost_profile, scan_mode);
    return out;
}

}  // namespace adanav
