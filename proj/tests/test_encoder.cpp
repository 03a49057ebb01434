#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "adanav/core/random.hpp"
#include "adanav/encoder/encoder.hpp"

using namespace adanav;

namespace {

ViewImage random_image(SeededStream& s, int side) {
    ViewImage img(side, side);
    for (auto& v : img.data) v = static_cast<float>(s.uniform());
    return img;
}

}  // namespace

TEST_CASE("encode_full is deterministic and non-degenerate") {
    EncoderConfig cfg = EncoderConfig::desk();
    Encoder enc(cfg);
    SeededStream s(Seed{21});
    ViewImage a = random_image(s, cfg.image_side);
    ViewImage b = random_image(s, cfg.image_side);

    auto [ea1, tr1] = enc.encode_full(a);
    auto [ea2, tr2] = enc.encode_full(a);
    CHECK(ea1.values == ea2.values);  // bit-identical
    CHECK(tr1.similarities == tr2.similarities);

    auto [eb, trb] = enc.encode_full(b);
    CHECK(cosine_similarity(ea1, eb) < 1.0);

    CHECK(tr1.pooled.size() == static_cast<std::size_t>(cfg.layers));
    CHECK(tr1.similarities.size() == static_cast<std::size_t>(cfg.layers - 1));
    for (double sim : tr1.similarities) {
        CHECK(sim >= -1.0);
        CHECK(sim <= 1.0);
    }
}

TEST_CASE("encoder rejects shape mismatches") {
    Encoder enc(EncoderConfig::desk());
    ViewImage wrong(16, 16, 0.5f);
    CHECK_THROWS_AS(enc.encode_full(wrong), ShapeError);
    CHECK_THROWS_AS(enc.encode_mue(wrong, 0.5), ShapeError);
}

TEST_CASE("mue threshold 1.0 runs the full depth and matches encode_full") {
    EncoderConfig cfg = EncoderConfig::desk();
    Encoder enc(cfg);
    SeededStream s(Seed{22});
    ViewImage img = random_image(s, cfg.image_side);

    ExitRecord rec = enc.encode_mue(img, 1.0);
    CHECK(rec.exit_layer == cfg.layers);
    auto [full, trace] = enc.encode_full(img);
    CHECK(rec.embedding.values == full.values);
}

TEST_CASE("mue threshold 0 exits at layer 2 when the first similarity is positive") {
    EncoderConfig cfg = EncoderConfig::desk();
    Encoder enc(cfg);
    SeededStream s(Seed{23});
    ViewImage img = random_image(s, cfg.image_side);

    // The full trace is the oracle for the first similarity's sign.
    auto [emb, trace] = enc.encode_full(img);
    REQUIRE(trace.similarities[0] > 0.0);
    ExitRecord rec = enc.encode_mue(img, 0.0);
    CHECK(rec.exit_layer == 2);
    CHECK(rec.embedding.values == trace.pooled[1].values);
}

TEST_CASE("mue exit embedding equals the full trace's pooled state at the exit layer") {
    EncoderConfig cfg = EncoderConfig::desk();
    Encoder enc(cfg);
    SeededStream s(Seed{24});
    for (int trial = 0; trial < 5; ++trial) {
        ViewImage img = random_image(s, cfg.image_side);
        auto [emb, trace] = enc.encode_full(img);
        for (double threshold : {0.3, 0.95, 0.996, 0.999}) {
            ExitRecord rec = enc.encode_mue(img, threshold);
            CHECK(rec.embedding.values == trace.pooled[rec.exit_layer - 1].values);
            CHECK(rec.exit_layer >= 2);
            CHECK(rec.exit_layer <= cfg.layers);
        }
    }
}

TEST_CASE("exit layer is monotone in the threshold") {
    EncoderConfig cfg = EncoderConfig::desk();
    Encoder enc(cfg);
    SeededStream s(Seed{25});
    for (int trial = 0; trial < 4; ++trial) {
        ViewImage img = random_image(s, cfg.image_side);
        int prev = 0;
        for (double t : {0.0, 0.5, 0.9, 0.95, 0.99, 0.995, 0.997, 0.999, 1.0}) {
            int layer = enc.encode_mue(img, t).exit_layer;
            CHECK(layer >= prev);
            prev = layer;
        }
    }
}

TEST_CASE("budgeted batch equals per-sample mue bit-for-bit") {
    EncoderConfig cfg = EncoderConfig::desk();
    Encoder enc(cfg);
    SeededStream s(Seed{26});
    for (int trial = 0; trial < 10; ++trial) {
        int n = 1 + static_cast<int>(s.uniform_int(12));
        std::vector<ViewImage> imgs;
        std::vector<double> thresholds;
        for (int i = 0; i < n; ++i) {
            imgs.push_back(random_image(s, cfg.image_side));
            double t = s.uniform();
            thresholds.push_back(t < 0.3 ? 1.0 : (t < 0.6 ? 0.996 : s.uniform()));
        }
        BatchResult batch = enc.encode_batch_budgeted(imgs, thresholds);
        CHECK(batch.layer_executions <= batch.budget);
        std::int64_t expected_execs = 0;
        for (int i = 0; i < n; ++i) {
            ExitRecord solo = enc.encode_mue(imgs[i], thresholds[i]);
            CHECK(batch.records[i].exit_layer == solo.exit_layer);
            CHECK(batch.records[i].embedding.values == solo.embedding.values);
            expected_execs += solo.exit_layer;
        }
        CHECK(batch.layer_executions == expected_execs);
    }
}

TEST_CASE("budgeted batch edge cases") {
    EncoderConfig cfg = EncoderConfig::desk();
    Encoder enc(cfg);
    SeededStream s(Seed{27});
    ViewImage img = random_image(s, cfg.image_side);

    // singleton equals encode_mue exactly
    BatchResult one = enc.encode_batch_budgeted({img}, {0.995});
    ExitRecord solo = enc.encode_mue(img, 0.995);
    CHECK(one.records[0].exit_layer == solo.exit_layer);
    CHECK(one.records[0].embedding.values == solo.embedding.values);

    // all thresholds 1.0 run the full depth
    BatchResult full = enc.encode_batch_budgeted({img, img, img}, {1.0, 1.0, 1.0});
    for (const auto& r : full.records) CHECK(r.exit_layer == cfg.layers);
    CHECK(full.layer_executions == full.budget);

    CHECK_THROWS_AS(enc.encode_batch_budgeted({img}, {0.5, 0.5}), BatchShapeError);
    CHECK_THROWS_AS(enc.encode_batch_budgeted({img}, {1.5}), RangeError);
}

TEST_CASE("saturation curve basics") {
    EncoderConfig cfg = EncoderConfig::desk();
    Encoder enc(cfg);
    SeededStream s(Seed{28});
    ViewImage img = random_image(s, cfg.image_side);

    auto single = enc.saturation_curve({img});
    auto [emb, trace] = enc.encode_full(img);
    CHECK(single == trace.similarities);

    auto duplicated = enc.saturation_curve({img, img, img});
    for (std::size_t i = 0; i < single.size(); ++i)
        CHECK(duplicated[i] == doctest::Approx(single[i]).epsilon(1e-12));

    for (double v : duplicated) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
    CHECK_THROWS_AS(enc.saturation_curve({}), EmptySample);
}

TEST_CASE("config validation") {
    EncoderConfig bad = EncoderConfig::desk();
    bad.layers = 1;
    CHECK_THROWS_AS(Encoder{bad}, ConfigError);
    bad = EncoderConfig::desk();
    bad.patch = 7;  // 32 % 7 != 0
    CHECK_THROWS_AS(Encoder{bad}, ConfigError);
}
