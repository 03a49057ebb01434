#pragma once

#include <cstdint>

#include "adanav/core/error.hpp"
#include "adanav/encoder/encoder.hpp"

namespace adanav {

// Reported "GFLOPs" are multiply-accumulates / 1e9. This convention string is
// embedded in every report.
inline constexpr const char* kCostConvention = "macs-as-gflops";

// Analytical transformer cost model, counted in MACs:
//   per layer: 4*N*d^2 (QKV + output projections) + 2*N^2*d (attention
//   matmuls) + 2*N*d*mlp (MLP), plus a one-time patch embed of (N-1)*d*3*p^2.
struct CostModel {
    std::int64_t layer_macs = 0;
    std::int64_t patch_macs = 0;
    std::int64_t view_elements = 0;  // flattened view length at this profile
    int layers = 0;

    static CostModel from(const EncoderConfig& cfg) {
        cfg.validate();
        const std::int64_t n = cfg.tokens();
        const std::int64_t d = cfg.hidden;
        const std::int64_t m = cfg.mlp_dim;
        CostModel cm;
        cm.layers = cfg.layers;
        cm.layer_macs = 4 * n * d * d + 2 * n * n * d + 2 * n * d * m;
        cm.patch_macs = (n - 1) * d * 3 * cfg.patch * cfg.patch;
        cm.view_elements = static_cast<std::int64_t>(3) * cfg.image_side * cfg.image_side;
        return cm;
    }

    double full_view_gflops() const {
        return static_cast<double>(patch_macs + layers * layer_macs) * 1e-9;
    }

    double exit_gflops(int exit_layer) const {
        if (exit_layer < 1 || exit_layer > layers)
            throw RangeError("CostModel: exit_layer out of [1, L]");
        return static_cast<double>(patch_macs + static_cast<std::int64_t>(exit_layer) *
                                                    layer_macs) * 1e-9;
    }
};

inline double cost_full_view(const EncoderConfig& cfg) {
    return CostModel::from(cfg).full_view_gflops();
}

inline double cost_exit(const EncoderConfig& cfg, int exit_layer) {
    return CostModel::from(cfg).exit_gflops(exit_layer);
}

}  // namespace adanav
