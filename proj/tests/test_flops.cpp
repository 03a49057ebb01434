#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adanav/flops/ledger.hpp"

using namespace adanav;

TEST_CASE("vit_b16 profile calibrates against the published per-step baseline") {
    // 607.06 GFLOPs per 36-view step => 16.86 per view, +-10%.
    double per_view = cost_full_view(EncoderConfig::vit_b16());
    CHECK(per_view > 607.06 / 36.0 * 0.9);
    CHECK(per_view < 607.06 / 36.0 * 1.1);
    double per_step = per_view * kViewsPerPanorama;
    CHECK(per_step >= 546.0);
    CHECK(per_step <= 668.0);
}

TEST_CASE("cost is linear in depth and exit costs interpolate") {
    EncoderConfig cfg = EncoderConfig::desk();
    CostModel cm = CostModel::from(cfg);

    CHECK(cm.exit_gflops(cfg.layers) == doctest::Approx(cm.full_view_gflops()));

    EncoderConfig doubled = cfg;
    doubled.layers *= 2;
    CostModel cm2 = CostModel::from(doubled);
    double delta = cm2.full_view_gflops() - cm.full_view_gflops();
    CHECK(delta == doctest::Approx(cfg.layers * cm.layer_macs * 1e-9).epsilon(1e-12));

    CHECK(cm.exit_gflops(cfg.layers / 2) ==
          doctest::Approx((cm.patch_macs + (cfg.layers / 2) * cm.layer_macs) * 1e-9));

    CHECK_THROWS_AS(cm.exit_gflops(0), RangeError);
    CHECK_THROWS_AS(cm.exit_gflops(cfg.layers + 1), RangeError);
}

TEST_CASE("ledger_step prices navigable, exits, hits, and masked views") {
    CostModel cm = CostModel::from(EncoderConfig::vit_b16());

    // all 36 navigable
    std::vector<int> all;
    for (int j = 1; j <= kViewsPerPanorama; ++j) all.push_back(j);
    StepCost c = ledger_step(build_plan(all, 0), {}, {}, cm);
    CHECK(c.encoder_gflops ==
          doctest::Approx(kViewsPerPanorama * cm.full_view_gflops()).epsilon(1e-12));

    // single navigable, k = 0
    StepCost c1 = ledger_step(build_plan({10}, 0), {}, {}, cm);
    CHECK(c1.encoder_gflops == doctest::Approx(cm.full_view_gflops()).epsilon(1e-12));

    // extended views: misses pay their exit depth, hits pay nothing
    SelectionPlan plan = build_plan({10}, 2);
    std::vector<std::pair<int, int>> exits = {{9, 6}, {11, 12}};
    CacheEvents ev;
    ev.hits = 2;
    ev.misses = 2;
    ev.hash_ops = 6;
    ev.hyperplanes = 10;
    StepCost c2 = ledger_step(plan, exits, ev, cm);
    CHECK(c2.encoder_gflops ==
          doctest::Approx(cm.full_view_gflops() + cm.exit_gflops(6) + cm.exit_gflops(12)));
    CHECK(c2.hash_gflops == doctest::Approx(6.0 * 10.0 * cm.view_elements * 1e-9));
    CHECK(c2.policy_gflops == doctest::Approx(policy_step_gflops(cm)));
    CHECK(c2.subgoal_gflops == 0.0);

    StepCost c3 = ledger_step(plan, exits, ev, cm, /*scan_mode=*/true);
    CHECK(c3.subgoal_gflops == doctest::Approx(subgoal_step_gflops()));
}

TEST_CASE("policy constant reproduces the published component share") {
    CostModel cm = CostModel::from(EncoderConfig::vit_b16());
    double encoder = kViewsPerPanorama * cm.full_view_gflops();
    double policy = policy_step_gflops(cm);
    double share = encoder / (encoder + policy);
    CHECK(share >= 0.99);  // published breakdown: visual encoder 99.50%
}

TEST_CASE("ledger totals are exact sums of steps") {
    CostLedger ledger;
    StepCost a{1.0, 0.1, 0.01, 0.001};
    StepCost b{2.0, 0.2, 0.02, 0.002};
    ledger.add_step(a);
    ledger.add_step(b);
    CHECK(ledger.step_count() == 2);
    CHECK(ledger.totals().encoder_gflops == doctest::Approx(3.0));
    CHECK(ledger.totals().total_gflops() ==
          doctest::Approx(a.total_gflops() + b.total_gflops()));
}
