#pragma once

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "adanav/runner/runner.hpp"

namespace adanav {

namespace detail {

inline std::string csv_cell(const std::string& s, int width) {
    std::string out = s;
    if (static_cast<int>(out.size()) < width)
        out.insert(out.begin(), width - out.size(), ' ');
    return out;
}

inline std::string csv_num(double v, int width, int precision = 4) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return csv_cell(os.str(), width);
}

inline std::string sweep_row(const std::string& param, const std::string& value,
                             const SuiteResult& r) {
    const auto& a = r.metrics.aggregate;
    std::ostringstream os;
    os << csv_cell(param, 16) << "," << csv_cell(value, 10) << "," << csv_num(a.tl, 10, 3)
       << "," << csv_num(a.osr, 8, 3) << "," << csv_num(a.sr, 8, 3) << ","
       << csv_num(a.spl, 8, 3) << "," << csv_num(a.gp, 8, 3) << ","
       << csv_num(r.gflops.encoder_gflops, 14, 2) << ","
       << csv_num(r.gflops.policy_gflops, 12, 2) << ","
       << csv_num(r.gflops.hash_gflops, 12, 4) << ","
       << csv_num(r.gflops.subgoal_gflops, 12, 6) << ","
       << csv_num(r.gflops.total_gflops(), 14, 2);
    return os.str();
}

inline std::string sweep_header() {
    std::ostringstream os;
    os << csv_cell("param", 16) << "," << csv_cell("value", 10) << "," << csv_cell("tl", 10)
       << "," << csv_cell("osr", 8) << "," << csv_cell("sr", 8) << "," << csv_cell("spl", 8)
       << "," << csv_cell("gp", 8) << "," << csv_cell("encoder_gflops", 14) << ","
       << csv_cell("policy_gflops", 12) << "," << csv_cell("hash_gflops", 12) << ","
       << csv_cell("subgoal_gflops", 12) << "," << csv_cell("total_gflops", 14);
    return os.str();
}

}  // namespace detail

// One sweep: vary a single parameter over a grid, one aligned-CSV row per
// grid point. rho_temporal points regenerate the environment; everything else
// reuses it.
inline std::string run_ablation(const RunConfig& base, const std::string& param,
                                const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("ablate: empty parameter grid");
    if (param != "k" && param != "a" && param != "cache_similarity" &&
        param != "rho_temporal")
        throw ConfigError("ablate: parameter must be one of k|a|cache_similarity|rho_temporal");

    std::ostringstream out;
    out << detail::sweep_header() << "\n";

    EnvGraph env;
    std::vector<EpisodeSpec> specs;
    Encoder encoder(base.encoder);
    const bool env_fixed = param != "rho_temporal";
    if (env_fixed) {
        env = realize_env(base.env);
        specs = build_suite(env, base.suite);
    }

    for (double v : values) {
        RunConfig cfg = base;
        std::ostringstream label;
        if (param == "k") {
            cfg.k = static_cast<int>(v);
            label << cfg.k;
        } else if (param == "a") {
            cfg.thresholds.aggressiveness = v;
            label << v;
        } else if (param == "cache_similarity") {
            cfg.cache_similarity_threshold = v;
            label << v;
        } else {
            cfg.env.file.clear();
            cfg.env.rho_temporal = v;
            label << v;
        }
        cfg.validate();
        SuiteResult r;
        if (env_fixed) {
            r = run_suite(env, specs, cfg.agent(), encoder, cfg.jobs);
        } else {
            EnvGraph e2 = realize_env(cfg.env);
            auto s2 = build_suite(e2, cfg.suite);
            r = run_suite(e2, s2, cfg.agent(), encoder, cfg.jobs);
        }
        out << detail::sweep_row(param, label.str(), r) << "\n";
    }
    return out.str();
}

// Corruption study: a clean row plus one row per corruption kind at the given
// severity; optionally a median-filtered row per kind.
inline std::string run_corruption_suite(const RunConfig& base, int severity,
                                        bool with_median_filter) {
    std::ostringstream out;
    out << detail::sweep_header() << "\n";

    EnvGraph env = realize_env(base.env);
    std::vector<EpisodeSpec> specs = build_suite(env, base.suite);
    Encoder encoder(base.encoder);

    auto run_one = [&](const std::string& label, std::optional<CorruptionConfig> corr,
                       int filter) {
        RunConfig cfg = base;
        cfg.corruption = corr;
        cfg.median_filter = filter;
        cfg.validate();
        SuiteResult r = run_suite(env, specs, cfg.agent(), encoder, cfg.jobs);
        out << detail::sweep_row("corruption", label, r) << "\n";
    };

    run_one("none", std::nullopt, 0);
    for (CorruptionKind kind : {CorruptionKind::Speckle, CorruptionKind::LowLight,
                                CorruptionKind::Defocus, CorruptionKind::MotionBlur}) {
        run_one(corruption_name(kind), CorruptionConfig{kind, severity}, 0);
        if (with_median_filter)
            run_one(std::string(corruption_name(kind)) + "+med5",
                    CorruptionConfig{kind, severity}, 5);
    }
    return out.str();
}

// Appendix-style saturation measurement on procedurally rendered images.
inline std::string run_saturation(const EncoderConfig& cfg, int samples, Seed seed) {
    if (samples < 1) throw ConfigError("saturation: samples must be >= 1");
    Encoder encoder(cfg);
    SeededStream stream(seed);
    std::vector<ViewImage> imgs;
    for (int i = 0; i < samples; ++i) {
        std::vector<double> latent(kLatentDim);
        double norm = 0.0;
        for (auto& v : latent) {
            v = stream.normal();
            norm += v * v;
        }
        norm = std::sqrt(norm);
        for (auto& v : latent) v /= norm;
        imgs.push_back(render_view(latent, cfg.image_side));
    }
    auto curve = encoder.saturation_curve(imgs);
    std::ostringstream out;
    out << "layer_pair,mean_consecutive_similarity\n";
    for (std::size_t i = 0; i < curve.size(); ++i)
        out << (i + 1) << "-" << (i + 2) << "," << std::setprecision(10) << curve[i] << "\n";
    return out.str();
}

}  // namespace adanav
