#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "adanav/flops/cost_model.hpp"
#include "adanav/spatial/selection.hpp"

namespace adanav {

// Non-encoder transformer stack (history encoder + cross-modal policy) is
// modeled as a constant per-step cost at the measured share of a full
// 36-view encoder pass: (0.07 + 0.39) / 99.50 of the encoder baseline.
inline constexpr double kPolicyShareOfEncoder = (0.07 + 0.39) / 99.50;

// Occupancy-scan processing cost per step (scan-only subgoal mode).
inline constexpr std::int64_t kScanMacsPerBin = 32;
inline constexpr int kScanBins = 360;

struct StepCost {
    double encoder_gflops = 0.0;
    double policy_gflops = 0.0;
    double hash_gflops = 0.0;
    double subgoal_gflops = 0.0;

    double total_gflops() const {
        return encoder_gflops + policy_gflops + hash_gflops + subgoal_gflops;
    }

    StepCost& operator+=(const StepCost& o) {
        encoder_gflops += o.encoder_gflops;
        policy_gflops += o.policy_gflops;
        hash_gflops += o.hash_gflops;
        subgoal_gflops += o.subgoal_gflops;
        return *this;
    }
};

inline double policy_step_gflops(const CostModel& cm) {
    return kPolicyShareOfEncoder * kViewsPerPanorama * cm.full_view_gflops();
}

inline double subgoal_step_gflops() {
    return static_cast<double>(kScanBins) * kScanMacsPerBin * 1e-9;
}

// SimHash projection cost: n hyperplane dot products per hash/lookup.
inline double hash_op_gflops(int hyperplanes, std::int64_t flat_dim) {
    return static_cast<double>(hyperplanes) * static_cast<double>(flat_dim) * 1e-9;
}

struct CacheEvents {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t hash_ops = 0;
    int hyperplanes = 0;
};

// One Algorithm-1 invocation priced under the given cost profile: navigable
// views cost a full pass, extended misses cost their exit depth, masked and
// cache-hit views cost nothing on the encoder.
inline StepCost ledger_step(const SelectionPlan& plan,
                            const std::vector<std::pair<int, int>>& miss_exit_layers,
                            const CacheEvents& events, const CostModel& cm,
                            bool scan_mode = false) {
    StepCost c;
    c.encoder_gflops = plan.count(ViewClass::Navigable) * cm.full_view_gflops();
    for (const auto& [index, exit_layer] : miss_exit_layers) {
        (void)index;
        c.encoder_gflops += cm.exit_gflops(exit_layer);
    }
    c.hash_gflops = static_cast<double>(events.hash_ops) *
                    hash_op_gflops(events.hyperplanes, cm.view_elements);
    c.policy_gflops = policy_step_gflops(cm);
    c.subgoal_gflops = scan_mode ? subgoal_step_gflops() : 0.0;
    return c;
}

// Per-component FLOPs accumulator; totals are exact sums of step costs.
class CostLedger {
  public:
    void add_step(const StepCost& c) {
        steps_.push_back(c);
        totals_ += c;
    }

    const std::vector<StepCost>& steps() const { return steps_; }
    const StepCost& totals() const { return totals_; }
    std::size_t step_count() const { return steps_.size(); }

  private:
    std::vector<StepCost> steps_;
    StepCost totals_;
};

}  // namespace adanav
