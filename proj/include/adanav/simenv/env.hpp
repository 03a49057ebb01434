#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numbers>
#include <queue>
#include <unordered_map>
#include <vector>

#include "adanav/core/error.hpp"
#include "adanav/core/random.hpp"
#include "adanav/core/types.hpp"
#include "adanav/subgoal/scan.hpp"

namespace adanav {

// Geometry and locality constants for the procedural navigation graphs.
inline constexpr double kEdgeRadiusMeters = 2.5;
inline constexpr int kLatentDim = 48;
inline constexpr double kScanOpeningHalfWidthDeg = 11.0;
inline constexpr double kScanWallDepth = 1.0;

struct EnvNode {
    double x = 0.0;
    double y = 0.0;
    std::vector<int> neighbors;                       // node ids, ascending
    std::array<int, kViewsPerPanorama + 1> neighbor_for_view{};  // 1-based; -1 = none
    std::vector<int> navigable;                       // sorted view indices
};

// Procedural navigation environment: a connected geometric graph in the plane
// with per-node panorama latents. sigma_spatial controls correlation between
// adjacent views of one panorama; rho_temporal is the fraction of view slots
// bound to world-locked latents shared (up to jitter) across all nodes, which
// is what makes consecutive-step panoramas overlap.
struct EnvGraph {
    int node_count = 0;
    double branching = 5.0;
    double sigma_spatial = 0.3;
    double rho_temporal = 0.8;
    Seed seed{0};
    double world_side = 0.0;

    std::vector<EnvNode> nodes;
    std::vector<std::vector<std::vector<double>>> latents;  // [node][view 0..35][dim]
    std::vector<std::vector<double>> identity;              // [node][dim], goal signatures
    std::vector<bool> world_locked;                         // [36]

    double edge_length(int u, int v) const {
        double dx = nodes[u].x - nodes[v].x;
        double dy = nodes[u].y - nodes[v].y;
        return std::sqrt(dx * dx + dy * dy);
    }

    double euclid(int u, int v) const { return edge_length(u, v); }

    // Geodesic distances from src over edge lengths.
    std::vector<double> shortest_from(int src) const {
        std::vector<double> dist(nodes.size(), std::numeric_limits<double>::infinity());
        dist[src] = 0.0;
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.push({0.0, src});
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d > dist[u]) continue;
            for (int v : nodes[u].neighbors) {
                double nd = d + edge_length(u, v);
                if (nd < dist[v]) {
                    dist[v] = nd;
                    pq.push({nd, v});
                }
            }
        }
        return dist;
    }
};

namespace detail {

inline double heading_deg(const EnvNode& from, const EnvNode& to) {
    double h = std::atan2(to.y - from.y, to.x - from.x) * 180.0 / std::numbers::pi;
    if (h < 0.0) h += 360.0;
    return h;
}

// Ring-smoothing bandwidth giving adjacent-view correlation ~ sigma.
inline double ring_bandwidth(double sigma) {
    if (sigma <= 0.0) return 0.0;
    if (sigma >= 0.999) return 12.0;
    return 1.0 / (2.0 * std::sqrt(std::log(1.0 / sigma)));
}

inline void normalize(std::vector<double>& v) {
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    if (n > 0.0)
        for (double& x : v) x /= n;
}

// 36 x dim ring of iid normals, circularly Gaussian-smoothed along the ring.
inline std::vector<std::vector<double>> smoothed_ring(SeededStream stream, double sigma,
                                                      int dim) {
    std::vector<std::vector<double>> raw(kViewsPerPanorama, std::vector<double>(dim));
    for (auto& row : raw)
        for (double& v : row) v = stream.normal();
    double bw = ring_bandwidth(sigma);
    if (bw <= 0.0) {
        for (auto& row : raw) normalize(row);
        return raw;
    }
    int reach = std::min(kViewsPerPanorama / 2, static_cast<int>(std::ceil(3.0 * bw)));
    std::vector<double> kernel(2 * reach + 1);
    for (int d = -reach; d <= reach; ++d)
        kernel[d + reach] = std::exp(-0.5 * (d / bw) * (d / bw));
    std::vector<std::vector<double>> out(kViewsPerPanorama, std::vector<double>(dim, 0.0));
    for (int j = 0; j < kViewsPerPanorama; ++j) {
        for (int d = -reach; d <= reach; ++d) {
            int src = ((j + d) % kViewsPerPanorama + kViewsPerPanorama) % kViewsPerPanorama;
            double w = kernel[d + reach];
            for (int m = 0; m < dim; ++m) out[j][m] += w * raw[src][m];
        }
        normalize(out[j]);
    }
    return out;
}

// Smooth planar identity field: random Fourier components at three octaves of
// the world scale. Nearby positions get similar identities, which is what the
// greedy policy's goal similarity descends on.
struct IdentityField {
    struct Component {
        double wx, wy, phase, amp;
    };
    std::vector<std::array<Component, 3>> comps;  // per latent dim

    static IdentityField draw(SeededStream stream, double world_side, int dim) {
        IdentityField f;
        f.comps.resize(dim);
        const double lambdas[3] = {4.0 * world_side, 1.6 * world_side, 0.7 * world_side};
        const double amps[3] = {1.0, 0.4, 0.1};
        for (int m = 0; m < dim; ++m) {
            for (int o = 0; o < 3; ++o) {
                double ang = stream.uniform(0.0, 2.0 * std::numbers::pi);
                double mag = 2.0 * std::numbers::pi / lambdas[o];
                f.comps[m][o] = {mag * std::cos(ang), mag * std::sin(ang),
                                 stream.uniform(0.0, 2.0 * std::numbers::pi), amps[o]};
            }
        }
        return f;
    }

    std::vector<double> at(double x, double y) const {
        std::vector<double> v(comps.size());
        for (std::size_t m = 0; m < comps.size(); ++m) {
            double s = 0.0;
            for (const auto& c : comps[m]) s += c.amp * std::cos(c.wx * x + c.wy * y + c.phase);
            v[m] = s;
        }
        normalize(v);
        return v;
    }
};

}  // namespace detail

inline EnvGraph generate_env(int node_count, double branching, double sigma_spatial,
                             double rho_temporal, Seed seed) {
    if (node_count < 2) throw GenError("generate_env: node count must be >= 2");
    if (branching <= 0.0) throw GenError("generate_env: branching must be > 0");
    if (sigma_spatial < 0.0 || sigma_spatial > 1.0)
        throw GenError("generate_env: sigma_spatial must be in [0,1]");
    if (rho_temporal < 0.0 || rho_temporal > 1.0)
        throw GenError("generate_env: rho_temporal must be in [0,1]");

    EnvGraph env;
    env.node_count = node_count;
    env.branching = branching;
    env.sigma_spatial = sigma_spatial;
    env.rho_temporal = rho_temporal;
    env.seed = seed;
    // The 0.85 factor compensates the boundary clipping of neighbor discs so
    // the realized mean degree tracks the requested branching.
    env.world_side = 0.85 * std::sqrt(node_count * std::numbers::pi * kEdgeRadiusMeters *
                                      kEdgeRadiusMeters / branching);

    SeededStream root(seed);

    // Node placement with a minimum separation so edges keep positive length.
    SeededStream pos_stream = root.fork("pos");
    constexpr double kMinSeparation = 0.3;
    env.nodes.resize(node_count);
    for (int i = 0; i < node_count; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
            double x = pos_stream.uniform(0.0, env.world_side);
            double y = pos_stream.uniform(0.0, env.world_side);
            placed = true;
            for (int j = 0; j < i; ++j) {
                double dx = env.nodes[j].x - x, dy = env.nodes[j].y - y;
                if (dx * dx + dy * dy < kMinSeparation * kMinSeparation) {
                    placed = false;
                    break;
                }
            }
            if (placed) {
                env.nodes[i].x = x;
                env.nodes[i].y = y;
            }
        }
        if (!placed) throw GenError("generate_env: cannot place nodes at this density");
    }

    // Geometric edges, then stitch components with closest cross-pairs.
    auto add_edge = [&](int u, int v) {
        env.nodes[u].neighbors.push_back(v);
        env.nodes[v].neighbors.push_back(u);
    };
    for (int u = 0; u < node_count; ++u)
        for (int v = u + 1; v < node_count; ++v)
            if (env.edge_length(u, v) <= kEdgeRadiusMeters) add_edge(u, v);

    std::vector<int> comp(node_count, -1);
    auto flood = [&](int start, int label) {
        std::vector<int> stack{start};
        comp[start] = label;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : env.nodes[u].neighbors)
                if (comp[v] < 0) {
                    comp[v] = label;
                    stack.push_back(v);
                }
        }
    };
    while (true) {
        std::fill(comp.begin(), comp.end(), -1);
        int labels = 0;
        for (int i = 0; i < node_count; ++i)
            if (comp[i] < 0) flood(i, labels++);
        if (labels == 1) break;
        double best = std::numeric_limits<double>::infinity();
        int bu = -1, bv = -1;
        for (int u = 0; u < node_count; ++u)
            for (int v = u + 1; v < node_count; ++v)
                if (comp[u] != comp[v] && env.edge_length(u, v) < best) {
                    best = env.edge_length(u, v);
                    bu = u;
                    bv = v;
                }
        add_edge(bu, bv);
    }
    for (auto& node : env.nodes) std::sort(node.neighbors.begin(), node.neighbors.end());

    // Map each neighbor to the view covering its heading; a taken slot probes
    // outward deterministically.
    for (int u = 0; u < node_count; ++u) {
        auto& node = env.nodes[u];
        node.neighbor_for_view.fill(-1);
        for (int w : node.neighbors) {
            int want = view_index_for_heading(detail::heading_deg(node, env.nodes[w]));
            int assigned = -1;
            for (int probe = 0; probe < kViewsPerPanorama && assigned < 0; ++probe) {
                int delta = (probe + 1) / 2 * ((probe % 2 == 0) ? 1 : -1);  // 0,+1,-1,+2,-2...
                int cand = ((want - 1 + delta) % kViewsPerPanorama + kViewsPerPanorama) %
                               kViewsPerPanorama + 1;
                if (node.neighbor_for_view[cand] < 0) assigned = cand;
            }
            node.neighbor_for_view[assigned] = w;
            node.navigable.push_back(assigned);
        }
        std::sort(node.navigable.begin(), node.navigable.end());
    }

    // World-locked view slots (shared scenery) vs node-specific slots.
    SeededStream lock_stream = root.fork("worldlock");
    env.world_locked.resize(kViewsPerPanorama);
    for (int j = 0; j < kViewsPerPanorama; ++j)
        env.world_locked[j] = lock_stream.uniform() < rho_temporal;

    auto world_ring = detail::smoothed_ring(root.fork("world"), sigma_spatial, kLatentDim);
    auto field = detail::IdentityField::draw(root.fork("field"), env.world_side, kLatentDim);

    // Node identities mix the smooth planar field (long-range goal gradient)
    // with a node-unique component that separates "the goal itself" from
    // "somewhere near the goal" when the policy compares similarities.
    constexpr double kIdentityUnique = 0.35;
    SeededStream unique_stream = root.fork("unique");
    env.identity.resize(node_count);
    for (int u = 0; u < node_count; ++u) {
        std::vector<double> id = field.at(env.nodes[u].x, env.nodes[u].y);
        std::vector<double> uniq(kLatentDim);
        for (double& v : uniq) v = unique_stream.normal();
        detail::normalize(uniq);
        for (int m = 0; m < kLatentDim; ++m) id[m] += kIdentityUnique * uniq[m];
        detail::normalize(id);
        env.identity[u] = std::move(id);
    }

    constexpr double kNavField = 0.98;
    constexpr double kNavNoise = 0.08;
    constexpr double kWorldJitter = 0.08;

    env.latents.assign(node_count,
                       std::vector<std::vector<double>>(kViewsPerPanorama));
    for (int u = 0; u < node_count; ++u) {
        auto tex_ring =
            detail::smoothed_ring(root.fork("tex", static_cast<std::uint64_t>(u)),
                                  sigma_spatial, kLatentDim);
        SeededStream jit =
            root.fork("jit", static_cast<std::uint64_t>(u));
        SeededStream navnoise =
            root.fork("navnoise", static_cast<std::uint64_t>(u));
        for (int j = 1; j <= kViewsPerPanorama; ++j) {
            std::vector<double> lat(kLatentDim);
            int w = env.nodes[u].neighbor_for_view[j];
            if (w >= 0) {
                // Navigable: dominated by the target node's identity signature.
                const auto& id = env.identity[w];
                for (int m = 0; m < kLatentDim; ++m)
                    lat[m] = kNavField * id[m] + kNavNoise * navnoise.normal() / std::sqrt(
                                                      static_cast<double>(kLatentDim));
            } else if (env.world_locked[j - 1]) {
                for (int m = 0; m < kLatentDim; ++m)
                    lat[m] = world_ring[j - 1][m] + kWorldJitter * jit.normal() / std::sqrt(
                                                        static_cast<double>(kLatentDim));
            } else {
                lat = tex_ring[j - 1];
            }
            detail::normalize(lat);
            env.latents[u][j - 1] = std::move(lat);
        }
    }
    return env;
}

// --- Procedural renderer ---------------------------------------------------

namespace detail {

// Fixed low-frequency cosine basis in normalized coordinates; independent of
// any environment seed so a latent always renders to the same image.
struct RenderBasis {
    int side;
    std::vector<float> table;  // [dim][channel][y][x]

    static const RenderBasis& get(int side) {
        static std::mutex mu;
        static std::unordered_map<int, RenderBasis> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(side);
        if (it != cache.end()) return it->second;

        RenderBasis b;
        b.side = side;
        b.table.resize(static_cast<std::size_t>(kLatentDim) * 3 * side * side);
        SeededStream stream(Seed{0xba515ULL});
        for (int m = 0; m < kLatentDim; ++m) {
            for (int c = 0; c < 3; ++c) {
                double fx = stream.uniform(0.5, 3.5) * (stream.uniform() < 0.5 ? -1.0 : 1.0);
                double fy = stream.uniform(0.5, 3.5) * (stream.uniform() < 0.5 ? -1.0 : 1.0);
                double phase = stream.uniform(0.0, 2.0 * std::numbers::pi);
                for (int y = 0; y < side; ++y) {
                    double ny = (y + 0.5) / side;
                    for (int x = 0; x < side; ++x) {
                        double nx = (x + 0.5) / side;
                        double v = std::cos(2.0 * std::numbers::pi * (fx * nx + fy * ny) + phase);
                        b.table[((static_cast<std::size_t>(m) * 3 + c) * side + y) * side + x] =
                            static_cast<float>(v);
                    }
                }
            }
        }
        return cache.emplace(side, std::move(b)).first->second;
    }
};

}  // namespace detail

inline constexpr double kRenderAmplitude = 0.42;

// Deterministic procedural image for a latent: mid-gray plus a latent-weighted
// sum of fixed low-frequency patterns, clamped to [0, 1].
inline ViewImage render_view(const std::vector<double>& latent, int side) {
    if (static_cast<int>(latent.size()) != kLatentDim)
        throw ShapeError("render_view: latent dimension mismatch");
    const auto& basis = detail::RenderBasis::get(side);
    ViewImage img(side, side, 0.5f);
    for (int m = 0; m < kLatentDim; ++m) {
        const float lm = static_cast<float>(kRenderAmplitude * latent[m]);
        if (lm == 0.0f) continue;
        const float* src = &basis.table[static_cast<std::size_t>(m) * 3 * side * side];
        for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] += lm * src[i];
    }
    for (float& v : img.data) v = std::clamp(v, 0.0f, 1.0f);
    return img;
}

// --- Scan synthesis ---------------------------------------------------------

// Synthetic occupancy scan for a node: openings of fixed angular width at
// neighbor headings (depth tracks edge length), walls elsewhere.
inline OccupancyScan synthesize_scan(const EnvGraph& env, int node, double max_range = 10.0) {
    OccupancyScan scan;
    scan.max_range = max_range;
    scan.readings.assign(OccupancyScan::kBins, kScanWallDepth);
    const auto& u = env.nodes[node];
    for (int w : u.neighbors) {
        double h = detail::heading_deg(u, env.nodes[w]);
        double depth = std::clamp(env.edge_length(node, w) + 1.5, 2.5, max_range);
        for (int d = static_cast<int>(-kScanOpeningHalfWidthDeg);
             d <= static_cast<int>(kScanOpeningHalfWidthDeg); ++d) {
            int bin = (static_cast<int>(std::floor(h)) + d % 360 + 360) % 360;
            scan.readings[bin] = std::max(scan.readings[bin], depth);
        }
    }
    return scan;
}

inline std::vector<double> true_navigable_headings(const EnvGraph& env, int node) {
    std::vector<double> out;
    for (int w : env.nodes[node].neighbors)
        out.push_back(detail::heading_deg(env.nodes[node], env.nodes[w]));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace adanav
