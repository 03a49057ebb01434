#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "adanav/core/error.hpp"
#include "adanav/core/random.hpp"
#include "adanav/core/similarity.hpp"
#include "adanav/core/types.hpp"

namespace adanav {

// Transformer-style visual encoder geometry. Weights are fully determined by
// the seed; there is no training anywhere in the artifact. The vit_b16 profile
// exists for cost accounting only and is never executed.
struct EncoderConfig {
    int layers = 12;
    int image_side = 32;
    int patch = 8;
    int hidden = 64;
    int mlp_dim = 256;
    Seed seed{0x5eedULL};

    int grid() const { return image_side / patch; }
    int tokens() const { return grid() * grid() + 1; }  // +1 class token
    int patch_dim() const { return ViewImage::kChannels * patch * patch; }

    void validate() const {
        if (layers < 2) throw ConfigError("EncoderConfig: layers must be >= 2");
        if (image_side <= 0 || patch <= 0 || image_side % patch != 0)
            throw ConfigError("EncoderConfig: image_side must be a positive multiple of patch");
        if (hidden <= 0 || mlp_dim <= 0)
            throw ConfigError("EncoderConfig: hidden and mlp_dim must be > 0");
    }

    static EncoderConfig desk(Seed seed = Seed{0x5eedULL}) {
        EncoderConfig c;
        c.seed = seed;
        return c;
    }

    // ViT-B/16 geometry (cost-model calibration profile).
    static EncoderConfig vit_b16() {
        EncoderConfig c;
        c.layers = 12;
        c.image_side = 224;
        c.patch = 16;
        c.hidden = 768;
        c.mlp_dim = 3072;
        return c;
    }
};

// Per-layer mean-pooled activations and the L-1 consecutive cosine similarities.
struct LayerTrace {
    std::vector<Embedding> pooled;      // one per executed layer
    std::vector<double> similarities;   // cos(pool(l), pool(l+1)), length executed-1
};

struct ExitRecord {
    int exit_layer = 0;      // in [2, L]; L means no similarity exceeded the threshold
    double threshold = 1.0;
    Embedding embedding;     // mean-pooled state of the exit layer
};

struct BatchResult {
    std::vector<ExitRecord> records;
    std::int64_t layer_executions = 0;
    std::int64_t budget = 0;  // |batch| * L, the worst case
};

class Encoder {
  public:
    explicit Encoder(const EncoderConfig& cfg) : cfg_(cfg) {
        cfg_.validate();
        init_weights();
    }

    const EncoderConfig& config() const { return cfg_; }

    std::pair<Embedding, LayerTrace> encode_full(const ViewImage& img) const {
        Sample s = start_sample(img);
        LayerTrace trace;
        trace.pooled.reserve(cfg_.layers);
        for (int l = 1; l <= cfg_.layers; ++l) {
            run_layer(l, s);
            trace.pooled.push_back(pool(s));
        }
        for (int l = 0; l + 1 < cfg_.layers; ++l)
            trace.similarities.push_back(
                cosine_similarity(trace.pooled[l], trace.pooled[l + 1]));
        return {trace.pooled.back(), std::move(trace)};
    }

    // Runs layers in order; after layer l >= 2 computes cos(pool(l-1), pool(l))
    // and exits at the first l where the similarity is strictly greater than
    // the threshold. Threshold 1.0 therefore disables exiting.
    ExitRecord encode_mue(const ViewImage& img, double threshold) const {
        if (threshold < 0.0 || threshold > 1.0)
            throw RangeError("encode_mue: threshold must be in [0, 1]");
        Sample s = start_sample(img);
        run_layer(1, s);
        Embedding prev = pool(s);
        for (int l = 2; l <= cfg_.layers; ++l) {
            run_layer(l, s);
            Embedding cur = pool(s);
            double sim = cosine_similarity(prev, cur);
            if (sim > threshold || l == cfg_.layers)
                return {l, threshold, std::move(cur)};
            prev = std::move(cur);
        }
        return {cfg_.layers, threshold, std::move(prev)};  // unreachable for L >= 2
    }

    // Budgeted-batch execution: layer-synchronous sweep where each sample exits
    // at its own layer. Element-wise identical to mapping encode_mue over the
    // batch; total layer executions never exceed |batch| * L.
    BatchResult encode_batch_budgeted(const std::vector<ViewImage>& imgs,
                                      const std::vector<double>& thresholds) const {
        if (imgs.size() != thresholds.size())
            throw BatchShapeError("encode_batch_budgeted: |imgs| != |thresholds|");
        for (double t : thresholds)
            if (t < 0.0 || t > 1.0)
                throw RangeError("encode_batch_budgeted: threshold must be in [0, 1]");

        BatchResult result;
        result.budget = static_cast<std::int64_t>(imgs.size()) * cfg_.layers;
        result.records.resize(imgs.size());

        std::vector<Sample> states;
        states.reserve(imgs.size());
        std::vector<Embedding> prev(imgs.size());
        std::vector<bool> active(imgs.size(), true);
        for (const auto& img : imgs) states.push_back(start_sample(img));

        for (int l = 1; l <= cfg_.layers; ++l) {
            for (std::size_t i = 0; i < states.size(); ++i) {
                if (!active[i]) continue;
                run_layer(l, states[i]);
                ++result.layer_executions;
                Embedding cur = pool(states[i]);
                if (l >= 2) {
                    double sim = cosine_similarity(prev[i], cur);
                    if (sim > thresholds[i] || l == cfg_.layers) {
                        result.records[i] = {l, thresholds[i], std::move(cur)};
                        active[i] = false;
                        continue;
                    }
                }
                prev[i] = std::move(cur);
            }
        }
        return result;
    }

    // Mean over the sample of each consecutive-layer similarity; length L-1.
    std::vector<double> saturation_curve(const std::vector<ViewImage>& imgs) const {
        if (imgs.empty()) throw EmptySample("saturation_curve: empty sample");
        std::vector<double> mean(cfg_.layers - 1, 0.0);
        for (const auto& img : imgs) {
            auto [emb, trace] = encode_full(img);
            for (std::size_t i = 0; i < mean.size(); ++i)
                mean[i] += trace.similarities[i];
        }
        for (double& m : mean) m /= static_cast<double>(imgs.size());
        return mean;
    }

  private:
    struct LayerWeights {
        std::vector<float> wq, wk, wv, wo;  // hidden x hidden
        std::vector<float> w1;              // hidden x mlp
        std::vector<float> w2;              // mlp x hidden
    };

    struct Sample {
        std::vector<float> x;  // tokens x hidden, residual stream
    };

    EncoderConfig cfg_;
    std::vector<float> patch_proj_;  // patch_dim x hidden
    std::vector<float> pos_;         // tokens x hidden
    std::vector<float> cls_;         // hidden
    std::vector<LayerWeights> layers_;

    static std::vector<float> draw_matrix(SeededStream s, std::size_t n, double scale) {
        std::vector<float> m(n);
        for (auto& v : m) v = static_cast<float>(s.normal() * scale);
        return m;
    }

    void init_weights() {
        SeededStream root(cfg_.seed);
        const int d = cfg_.hidden;
        const double attn_scale = 1.0 / std::sqrt(static_cast<double>(d));

        // Positional/class components are kept small relative to the patch
        // signal; a large image-independent common mode would compress the
        // cosine range between embeddings of distinct images toward 1.
        patch_proj_ = draw_matrix(root.fork("patch"),
                                  static_cast<std::size_t>(cfg_.patch_dim()) * d,
                                  1.0 / std::sqrt(static_cast<double>(cfg_.patch_dim())));
        pos_ = draw_matrix(root.fork("pos"), static_cast<std::size_t>(cfg_.tokens()) * d, 0.02);
        cls_ = draw_matrix(root.fork("cls"), static_cast<std::size_t>(d), 0.02);

        layers_.resize(cfg_.layers);
        for (int l = 0; l < cfg_.layers; ++l) {
            auto& lw = layers_[l];
            const std::uint64_t li = static_cast<std::uint64_t>(l);
            // Output projections are damped with depth so the residual stream
            // dominates later-layer deltas; consecutive-layer similarity then
            // climbs through the exit-threshold band instead of plateauing.
            const double out_gain = 0.5 / (1.0 + 2.4 * l);
            lw.wq = draw_matrix(root.fork("wq", li), static_cast<std::size_t>(d) * d, attn_scale);
            lw.wk = draw_matrix(root.fork("wk", li), static_cast<std::size_t>(d) * d, attn_scale);
            lw.wv = draw_matrix(root.fork("wv", li), static_cast<std::size_t>(d) * d, attn_scale);
            lw.wo = draw_matrix(root.fork("wo", li), static_cast<std::size_t>(d) * d,
                                attn_scale * out_gain);
            lw.w1 = draw_matrix(root.fork("w1", li), static_cast<std::size_t>(d) * cfg_.mlp_dim,
                                attn_scale);
            lw.w2 = draw_matrix(root.fork("w2", li),
                                static_cast<std::size_t>(cfg_.mlp_dim) * d,
                                out_gain / std::sqrt(static_cast<double>(cfg_.mlp_dim)));
        }
    }

    Sample start_sample(const ViewImage& img) const {
        if (img.height != cfg_.image_side || img.width != cfg_.image_side || !img.valid_shape())
            throw ShapeError("encoder: image shape does not match config");
        const int n = cfg_.tokens();
        const int d = cfg_.hidden;
        const int g = cfg_.grid();
        const int p = cfg_.patch;
        Sample s;
        s.x.assign(static_cast<std::size_t>(n) * d, 0.0f);

        // class token
        for (int j = 0; j < d; ++j) s.x[j] = cls_[j] + pos_[j];

        // patch embedding: token t = 1 + gy*g + gx; pixels centered at 0.5 so
        // the flat-field component of every image does not alias into a
        // shared embedding direction
        std::vector<float> patch_vec(cfg_.patch_dim());
        for (int gy = 0; gy < g; ++gy) {
            for (int gx = 0; gx < g; ++gx) {
                int idx = 0;
                for (int c = 0; c < ViewImage::kChannels; ++c)
                    for (int y = 0; y < p; ++y)
                        for (int x = 0; x < p; ++x)
                            patch_vec[idx++] = img.at(c, gy * p + y, gx * p + x) - 0.5f;
                const int t = 1 + gy * g + gx;
                float* out = &s.x[static_cast<std::size_t>(t) * d];
                for (int i = 0; i < cfg_.patch_dim(); ++i) {
                    const float vi = patch_vec[i];
                    const float* row = &patch_proj_[static_cast<std::size_t>(i) * d];
                    for (int j = 0; j < d; ++j) out[j] += vi * row[j];
                }
                const float* pe = &pos_[static_cast<std::size_t>(t) * d];
                for (int j = 0; j < d; ++j) out[j] += pe[j];
            }
        }
        return s;
    }

    // y = LN(x) per token, no affine.
    static void layer_norm(const float* x, float* y, int n, int d) {
        for (int t = 0; t < n; ++t) {
            const float* xt = x + static_cast<std::size_t>(t) * d;
            float* yt = y + static_cast<std::size_t>(t) * d;
            float mean = 0.0f;
            for (int j = 0; j < d; ++j) mean += xt[j];
            mean /= static_cast<float>(d);
            float var = 0.0f;
            for (int j = 0; j < d; ++j) {
                float c = xt[j] - mean;
                var += c * c;
            }
            var /= static_cast<float>(d);
            float inv = 1.0f / std::sqrt(var + 1e-5f);
            for (int j = 0; j < d; ++j) yt[j] = (xt[j] - mean) * inv;
        }
    }

    // out += a (n x din) * W (din x dout)
    static void matmul_add(const float* a, const float* w, float* out, int n, int din,
                           int dout) {
        for (int t = 0; t < n; ++t) {
            const float* at = a + static_cast<std::size_t>(t) * din;
            float* ot = out + static_cast<std::size_t>(t) * dout;
            for (int i = 0; i < din; ++i) {
                const float ai = at[i];
                const float* row = w + static_cast<std::size_t>(i) * dout;
                for (int j = 0; j < dout; ++j) ot[j] += ai * row[j];
            }
        }
    }

    // Odd nonlinearity: a rectifying activation would add an image-independent
    // rectification mean to every embedding, compressing cosine similarities
    // between unrelated images toward 1.
    static float activation(float v) { return std::tanh(v); }

    void run_layer(int layer_1based, Sample& s) const {
        const auto& lw = layers_[layer_1based - 1];
        const int n = cfg_.tokens();
        const int d = cfg_.hidden;
        const int m = cfg_.mlp_dim;
        const std::size_t nd = static_cast<std::size_t>(n) * d;

        thread_local std::vector<float> y, q, k, v, attn, proj, h;
        y.assign(nd, 0.0f);
        layer_norm(s.x.data(), y.data(), n, d);

        q.assign(nd, 0.0f);
        k.assign(nd, 0.0f);
        v.assign(nd, 0.0f);
        matmul_add(y.data(), lw.wq.data(), q.data(), n, d, d);
        matmul_add(y.data(), lw.wk.data(), k.data(), n, d, d);
        matmul_add(y.data(), lw.wv.data(), v.data(), n, d, d);

        // single-head attention
        attn.assign(nd, 0.0f);
        const float inv_sqrt_d = 1.0f / std::sqrt(static_cast<float>(d));
        std::vector<float> scores(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) {
            const float* qt = q.data() + static_cast<std::size_t>(t) * d;
            float maxs = -1e30f;
            for (int u = 0; u < n; ++u) {
                const float* ku = k.data() + static_cast<std::size_t>(u) * d;
                float dot = 0.0f;
                for (int j = 0; j < d; ++j) dot += qt[j] * ku[j];
                scores[u] = dot * inv_sqrt_d;
                if (scores[u] > maxs) maxs = scores[u];
            }
            float sum = 0.0f;
            for (int u = 0; u < n; ++u) {
                scores[u] = std::exp(scores[u] - maxs);
                sum += scores[u];
            }
            const float inv_sum = 1.0f / sum;
            float* at = attn.data() + static_cast<std::size_t>(t) * d;
            for (int u = 0; u < n; ++u) {
                const float wgt = scores[u] * inv_sum;
                const float* vu = v.data() + static_cast<std::size_t>(u) * d;
                for (int j = 0; j < d; ++j) at[j] += wgt * vu[j];
            }
        }
        proj.assign(nd, 0.0f);
        matmul_add(attn.data(), lw.wo.data(), proj.data(), n, d, d);
        for (std::size_t i = 0; i < nd; ++i) s.x[i] += proj[i];

        // MLP block
        layer_norm(s.x.data(), y.data(), n, d);
        h.assign(static_cast<std::size_t>(n) * m, 0.0f);
        matmul_add(y.data(), lw.w1.data(), h.data(), n, d, m);
        for (auto& hv : h) hv = activation(hv);
        proj.assign(nd, 0.0f);
        matmul_add(h.data(), lw.w2.data(), proj.data(), n, m, d);
        for (std::size_t i = 0; i < nd; ++i) s.x[i] += proj[i];
    }

    Embedding pool(const Sample& s) const {
        const int n = cfg_.tokens();
        const int d = cfg_.hidden;
        std::vector<float> out(static_cast<std::size_t>(d), 0.0f);
        for (int t = 0; t < n; ++t) {
            const float* xt = s.x.data() + static_cast<std::size_t>(t) * d;
            for (int j = 0; j < d; ++j) out[j] += xt[j];
        }
        const float inv = 1.0f / static_cast<float>(n);
        for (float& v : out) v *= inv;
        return Embedding(std::move(out));
    }
};

}  // namespace adanav
