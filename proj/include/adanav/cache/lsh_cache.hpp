#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "adanav/core/error.hpp"
#include "adanav/core/random.hpp"
#include "adanav/core/similarity.hpp"
#include "adanav/core/types.hpp"

namespace adanav {

// Random-hyperplane SimHash family. Bit i of a key is 1 iff the dot product
// with hyperplane i is strictly positive; an exact zero hashes to 0 so that
// boundary ties stay deterministic.
struct HashFamily {
    int bits = 10;
    std::int64_t dim = 0;
    std::vector<float> hyperplanes;  // bits x dim, row-major

    static HashFamily draw(int bits, std::int64_t dim, SeededStream stream) {
        HashFamily f;
        f.bits = bits;
        f.dim = dim;
        f.hyperplanes.resize(static_cast<std::size_t>(bits) * dim);
        for (auto& v : f.hyperplanes) v = static_cast<float>(stream.normal());
        return f;
    }

    std::uint64_t key(std::span<const float> v) const {
        if (static_cast<std::int64_t>(v.size()) != dim)
            throw ShapeError("HashFamily: input dimension mismatch");
        std::uint64_t k = 0;
        for (int b = 0; b < bits; ++b) {
            const float* row = &hyperplanes[static_cast<std::size_t>(b) * dim];
            double dot = 0.0;
            for (std::int64_t i = 0; i < dim; ++i) dot += static_cast<double>(row[i]) * v[i];
            if (dot > 0.0) k |= (1ULL << b);
        }
        return k;
    }
};

struct CacheStats {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t inserted = 0;
    std::uint64_t rejected = 0;   // inserts refused by the max_pairs guard
    std::uint64_t bytes = 0;      // (view elements + embedding elements) * 4
    std::uint64_t hash_ops = 0;
    double min_hit_similarity = 2.0;  // tracked for reuse soundness audits
};

// SimHash-keyed store of (view, embedding) pairs. A lookup scans the query's
// bucket for the stored view with maximal cosine similarity and reuses its
// embedding only when that maximum strictly exceeds similarity_threshold.
class CacheTable {
  public:
    CacheTable(HashFamily family, double similarity_threshold, std::size_t max_pairs = 0)
        : family_(std::move(family)),
          similarity_threshold_(similarity_threshold),
          max_pairs_(max_pairs) {}

    double similarity_threshold() const { return similarity_threshold_; }
    int hash_bits() const { return family_.bits; }
    const CacheStats& stats() const { return stats_; }
    std::size_t pair_count() const { return pair_count_; }

    void insert(const ViewImage& view, const Embedding& emb) {
        ++stats_.hash_ops;
        if (max_pairs_ != 0 && pair_count_ >= max_pairs_) {
            ++stats_.rejected;
            return;
        }
        std::uint64_t key = family_.key(view.flat());
        buckets_[key].emplace_back(view, emb);
        ++pair_count_;
        ++stats_.inserted;
        stats_.bytes += (view.size() + emb.size()) * 4;
    }

    std::optional<Embedding> find_similar(const ViewImage& view) {
        ++stats_.hash_ops;
        std::uint64_t key = family_.key(view.flat());
        auto it = buckets_.find(key);
        if (it != buckets_.end()) {
            double best = -2.0;
            const Embedding* best_emb = nullptr;
            for (const auto& [stored_view, stored_emb] : it->second) {
                double s;
                try {
                    s = cosine_similarity(view, stored_view);
                } catch (const DegenerateVector&) {
                    continue;  // degenerate pairs are never reused
                }
                if (s > best) {
                    best = s;
                    best_emb = &stored_emb;
                }
            }
            if (best_emb != nullptr && best > similarity_threshold_) {
                ++stats_.hits;
                if (best < stats_.min_hit_similarity) stats_.min_hit_similarity = best;
                return *best_emb;
            }
        }
        ++stats_.misses;
        return std::nullopt;
    }

  private:
    HashFamily family_;
    double similarity_threshold_;
    std::size_t max_pairs_;
    std::size_t pair_count_ = 0;
    std::unordered_map<std::uint64_t, std::vector<std::pair<ViewImage, Embedding>>> buckets_;
    CacheStats stats_;
};

}  // namespace adanav
