#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "adanav/core/median_filter.hpp"
#include "adanav/core/random.hpp"
#include "adanav/core/similarity.hpp"

using namespace adanav;

namespace {

std::vector<float> vec(std::initializer_list<float> v) { return std::vector<float>(v); }

ViewImage constant_image(int side, float value) {
    ViewImage img(side, side, value);
    return img;
}

}  // namespace

TEST_CASE("cosine similarity on analytic pairs") {
    auto a = vec({1.0f, 0.0f});
    auto b = vec({1.0f, 0.0f});
    CHECK(cosine_similarity(std::span<const float>(a), std::span<const float>(b)) ==
          doctest::Approx(1.0).epsilon(1e-12));

    auto c = vec({0.0f, 1.0f});
    CHECK(cosine_similarity(std::span<const float>(a), std::span<const float>(c)) ==
          doctest::Approx(0.0).epsilon(1e-12));

    auto d = vec({1.0f, 1.0f});
    CHECK(std::abs(cosine_similarity(std::span<const float>(d), std::span<const float>(a)) -
                   1.0 / std::sqrt(2.0)) < 1e-9);
}

TEST_CASE("cosine similarity errors and properties") {
    auto z = vec({0.0f, 0.0f});
    auto a = vec({1.0f, 2.0f});
    CHECK_THROWS_AS(cosine_similarity(std::span<const float>(z), std::span<const float>(a)),
                    DegenerateVector);
    auto b = vec({1.0f, 2.0f, 3.0f});
    CHECK_THROWS_AS(cosine_similarity(std::span<const float>(a), std::span<const float>(b)),
                    ShapeError);

    SeededStream s(Seed{77});
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<float> u(16), v(16);
        for (auto& x : u) x = static_cast<float>(s.normal());
        for (auto& x : v) x = static_cast<float>(s.normal());
        double self = cosine_similarity(std::span<const float>(u), std::span<const float>(u));
        CHECK(self == doctest::Approx(1.0).epsilon(1e-9));

        double uv = cosine_similarity(std::span<const float>(u), std::span<const float>(v));
        double vu = cosine_similarity(std::span<const float>(v), std::span<const float>(u));
        CHECK(uv == doctest::Approx(vu).epsilon(1e-12));
        CHECK(uv >= -1.0);
        CHECK(uv <= 1.0);

        std::vector<float> scaled(u);
        for (auto& x : scaled) x *= 3.5f;
        double su = cosine_similarity(std::span<const float>(scaled), std::span<const float>(v));
        CHECK(su == doctest::Approx(uv).epsilon(1e-6));
    }
}

TEST_CASE("seeded stream is deterministic") {
    SeededStream a(Seed{12345});
    SeededStream b(Seed{12345});
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("forked sub-streams pass a chi-square independence check") {
    SeededStream root(Seed{2024});
    SeededStream env = root.fork("env");
    SeededStream hash = root.fork("hash");

    // 10x10 contingency grid over 1e4 paired draws; joint uniformity.
    constexpr int kBins = 10;
    constexpr int kDraws = 10000;
    int counts[kBins][kBins] = {};
    for (int i = 0; i < kDraws; ++i) {
        int bu = std::min(kBins - 1, static_cast<int>(env.uniform() * kBins));
        int bv = std::min(kBins - 1, static_cast<int>(hash.uniform() * kBins));
        ++counts[bu][bv];
    }
    const double expected = static_cast<double>(kDraws) / (kBins * kBins);
    double chi2 = 0.0;
    for (auto& row : counts)
        for (int c : row) chi2 += (c - expected) * (c - expected) / expected;
    // 99.9th percentile of chi-square with 99 dof is ~148.2.
    CHECK(chi2 < 148.2);
}

TEST_CASE("normal draws have near-zero sample mean") {
    SeededStream s(Seed{7});
    double sum = 0.0;
    constexpr int kDraws = 100000;
    for (int i = 0; i < kDraws; ++i) sum += s.normal();
    CHECK(std::abs(sum / kDraws) < 0.05);
}

TEST_CASE("median filter basics") {
    ViewImage flat = constant_image(8, 0.25f);
    ViewImage f5 = median_filter(flat, 5);
    CHECK(f5.data == flat.data);

    ViewImage salted = constant_image(8, 0.25f);
    salted.at(1, 4, 4) = 1.0f;
    ViewImage restored = median_filter(salted, 3);
    CHECK(restored.at(1, 4, 4) == doctest::Approx(0.25f));

    ViewImage any(6, 6, 0.1f);
    any.at(0, 2, 3) = 0.9f;
    CHECK(median_filter(any, 1).data == any.data);
}

TEST_CASE("median filter rejects bad kernels") {
    ViewImage img = constant_image(8, 0.5f);
    CHECK_THROWS_AS(median_filter(img, 2), InvalidKernel);
    CHECK_THROWS_AS(median_filter(img, 0), InvalidKernel);
    CHECK_THROWS_AS(median_filter(img, 9), InvalidKernel);
}

TEST_CASE("median filter output stays within per-channel bounds") {
    SeededStream s(Seed{31});
    ViewImage img(9, 9);
    for (auto& v : img.data) v = static_cast<float>(s.uniform());
    ViewImage out = median_filter(img, 3);
    for (int c = 0; c < 3; ++c) {
        float lo = 1.0f, hi = 0.0f;
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 9; ++x) {
                lo = std::min(lo, img.at(c, y, x));
                hi = std::max(hi, img.at(c, y, x));
            }
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 9; ++x) {
                CHECK(out.at(c, y, x) >= lo);
                CHECK(out.at(c, y, x) <= hi);
            }
    }
}
