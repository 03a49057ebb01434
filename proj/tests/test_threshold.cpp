#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "adanav/adaptive/threshold.hpp"

using namespace adanav;

namespace {

ThresholdPolicy with_a(double a) {
    ThresholdPolicy p;
    p.aggressiveness = a;
    return p;
}

}  // namespace

TEST_CASE("A = 0 gives full-compute thresholds at every rank") {
    auto p = with_a(0.0);
    for (int r = 1; r <= 8; ++r) CHECK(threshold_for_rank(r, p) == 1.0);
}

TEST_CASE("default aggressiveness reproduces the published schedule") {
    auto p = with_a(9e-4);
    CHECK(threshold_for_rank(1, p) == 1.0);    // raw 0.99910 rounds to 0.999 -> cutoff
    CHECK(threshold_for_rank(2, p) == 1.0);    // raw 0.99820 rounds to 0.998 -> cutoff
    CHECK(threshold_for_rank(3, p) == 0.997);  // raw 0.99730
    CHECK(threshold_for_rank(4, p) == 0.996);  // raw 0.99641
}

TEST_CASE("neighboring aggressiveness rows") {
    auto p7 = with_a(7e-4);
    CHECK(threshold_for_rank(1, p7) == 1.0);
    CHECK(threshold_for_rank(2, p7) == 1.0);
    CHECK(threshold_for_rank(3, p7) == 1.0);
    CHECK(threshold_for_rank(4, p7) == 0.997);

    auto p15 = with_a(1.5e-3);
    CHECK(threshold_for_rank(1, p15) == 1.0);
    CHECK(threshold_for_rank(2, p15) == 0.997);
    CHECK(threshold_for_rank(3, p15) == 0.996);
    // Rank 4 computes to 0.994; the published table prints 0.993 and is
    // excluded from exact matching (documented discrepancy).
    CHECK(threshold_for_rank(4, p15) == 0.994);

    auto p22 = with_a(2.2e-3);
    // Rank 1 rounds to 0.998 and collapses to 1.0 under the cutoff; the
    // published 0.997 is a documented discrepancy.
    CHECK(threshold_for_rank(1, p22) == 1.0);
    CHECK(threshold_for_rank(2, p22) == 0.996);
    CHECK(threshold_for_rank(3, p22) == 0.993);
    // Rank 4 computes to 0.991 against a published 0.990 (documented).
    CHECK(threshold_for_rank(4, p22) == 0.991);
}

TEST_CASE("rank 0 is a caller bug") {
    CHECK_THROWS_AS(threshold_for_rank(0, with_a(9e-4)), NavigableNeedsNoThreshold);
}

TEST_CASE("thresholds are non-increasing in rank and stay in (0, 1]") {
    for (double a : {0.0, 5e-4, 9e-4, 2e-3, 1e-2}) {
        auto p = with_a(a);
        double prev = 1.0 + 1e-12;
        for (int r = 1; r <= 40; ++r) {
            double t = threshold_for_rank(r, p);
            CHECK(t > 0.0);
            CHECK(t <= 1.0);
            CHECK(t <= prev + 1e-12);
            prev = t;
        }
    }
}

TEST_CASE("cutoff boundary behavior") {
    ThresholdPolicy p = with_a(9e-4);
    // Raw 0.998202 rounds to exactly the cutoff and must collapse to 1.0.
    CHECK(round_half_away(p.t0 * std::exp(-p.aggressiveness * 2), 3) == 0.998);
    CHECK(threshold_for_rank(2, p) == 1.0);
}

TEST_CASE("schedule covers exactly the extended views") {
    auto plan = build_plan({10}, 2);
    auto sched = schedule_for_plan(plan, with_a(9e-4));
    CHECK(sched.size() == 4);
    CHECK(sched.count(8) == 1);
    CHECK(sched.count(9) == 1);
    CHECK(sched.count(11) == 1);
    CHECK(sched.count(12) == 1);
    CHECK(sched.count(10) == 0);
    CHECK(sched.at(8) == threshold_for_rank(2, with_a(9e-4)));
    CHECK(sched.at(9) == threshold_for_rank(1, with_a(9e-4)));

    auto none = build_plan({10}, 0);
    CHECK(schedule_for_plan(none, with_a(9e-4)).empty());
}

TEST_CASE("policy validation") {
    ThresholdPolicy bad;
    bad.t0 = 0.0;
    CHECK_THROWS_AS(threshold_for_rank(1, bad), ConfigError);
    bad = ThresholdPolicy{};
    bad.aggressiveness = -1.0;
    CHECK_THROWS_AS(threshold_for_rank(1, bad), ConfigError);
}
