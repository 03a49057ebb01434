#pragma once

#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "adanav/pipeline/episode.hpp"

namespace adanav {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

struct EnvSource {
    std::string file;  // when non-empty, load from file
    int nodes = 40;
    double branching = 5.0;
    double sigma_spatial = 0.3;
    double rho_temporal = 0.8;
    Seed seed{11};
};

struct SuiteConfig {
    int count = 50;
    Seed seed{123};
    int step_limit = 15;
    double success_radius = 3.0;
    int min_hops = 2;
};

// Fully resolved run configuration; every field is validated before any work.
struct RunConfig {
    EnvSource env;
    EncoderConfig encoder = EncoderConfig::desk(Seed{0x5eedULL});
    std::string cost_profile = "vit_b16";  // "vit_b16" or "executed"
    int k = 4;
    ThresholdPolicy thresholds{};
    bool cache_enabled = true;
    int cache_bits = 10;
    double cache_similarity_threshold = 0.85;
    std::size_t cache_max_pairs = 0;
    std::string subgoal_mode = "graph";  // "graph" or "scan"
    double scan_clearance_deg = 8.0;
    double scan_min_depth = 1.5;
    std::optional<CorruptionConfig> corruption;
    int median_filter = 0;
    SuiteConfig suite;
    double stop_threshold = 0.85;
    Seed run_seed{1};
    int jobs = 1;

    AgentConfig agent() const {
        AgentConfig a;
        a.encoder = encoder;
        a.cost_profile = cost_profile == "executed" ? encoder : EncoderConfig::vit_b16();
        a.k = k;
        a.policy = thresholds;
        a.cache_enabled = cache_enabled;
        a.cache_bits = cache_bits;
        a.cache_similarity_threshold = cache_similarity_threshold;
        a.cache_max_pairs = cache_max_pairs;
        a.scan_mode = subgoal_mode == "scan";
        a.scan_clearance_deg = scan_clearance_deg;
        a.scan_min_depth = scan_min_depth;
        a.corruption = corruption;
        a.median_filter_kernel = median_filter;
        a.stop_threshold = stop_threshold;
        a.run_seed = run_seed;
        return a;
    }

    void validate() const {
        thresholds.validate();
        encoder.validate();
        if (cost_profile != "vit_b16" && cost_profile != "executed")
            throw ConfigError("config: cost_profile must be \"vit_b16\" or \"executed\"");
        if (k < 0) throw ConfigError("config: k must be >= 0");
        if (cache_bits < 1 || cache_bits > 63)
            throw ConfigError("config: cache.bits must be in 1..63");
        if (cache_similarity_threshold < -1.0 || cache_similarity_threshold > 1.0)
            throw ConfigError("config: cache.similarity_threshold must be in [-1,1]");
        if (subgoal_mode != "graph" && subgoal_mode != "scan")
            throw ConfigError("config: subgoal.mode must be \"graph\" or \"scan\"");
        if (corruption && (corruption->severity < 1 || corruption->severity > 5))
            throw ConfigError("config: corruption.severity must be in 1..5");
        if (median_filter != 0 && (median_filter < 1 || median_filter % 2 == 0))
            throw ConfigError("config: median_filter must be 0 (off) or an odd kernel size");
        if (suite.count < 1) throw ConfigError("config: episodes.count must be >= 1");
        if (suite.step_limit < 1) throw ConfigError("config: episodes.step_limit must be >= 1");
        if (suite.success_radius <= 0.0)
            throw ConfigError("config: episodes.success_radius must be > 0");
        if (suite.min_hops < 1) throw ConfigError("config: episodes.min_hops must be >= 1");
        if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
        if (stop_threshold < -1.0 || stop_threshold > 1.0 + 1e-9)
            throw ConfigError("config: stop_threshold must be in [-1, 1]");
    }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key()))
            throw ConfigError("config: unknown key \"" + it.key() + "\" in " + where);
    }
}

}  // namespace detail

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig c;
    detail::reject_unknown_keys(
        j,
        {"env", "encoder", "cost_profile", "k", "thresholds", "cache", "subgoal",
         "corruption", "median_filter", "episodes", "stop_threshold", "run_seed", "jobs"},
        "top level");

    if (j.contains("env")) {
        const auto& je = j.at("env");
        detail::reject_unknown_keys(
            je, {"file", "nodes", "branching", "sigma_spatial", "rho_temporal", "seed"},
            "env");
        if (je.contains("file")) c.env.file = je.at("file").get<std::string>();
        if (je.contains("nodes")) c.env.nodes = je.at("nodes").get<int>();
        if (je.contains("branching")) c.env.branching = je.at("branching").get<double>();
        if (je.contains("sigma_spatial"))
            c.env.sigma_spatial = je.at("sigma_spatial").get<double>();
        if (je.contains("rho_temporal"))
            c.env.rho_temporal = je.at("rho_temporal").get<double>();
        if (je.contains("seed")) c.env.seed = Seed{je.at("seed").get<std::uint64_t>()};
    }
    if (j.contains("encoder")) {
        const auto& je = j.at("encoder");
        detail::reject_unknown_keys(
            je, {"layers", "image_side", "patch", "hidden", "mlp_dim", "seed"}, "encoder");
        if (je.contains("layers")) c.encoder.layers = je.at("layers").get<int>();
        if (je.contains("image_side")) c.encoder.image_side = je.at("image_side").get<int>();
        if (je.contains("patch")) c.encoder.patch = je.at("patch").get<int>();
        if (je.contains("hidden")) c.encoder.hidden = je.at("hidden").get<int>();
        if (je.contains("mlp_dim")) c.encoder.mlp_dim = je.at("mlp_dim").get<int>();
        if (je.contains("seed")) c.encoder.seed = Seed{je.at("seed").get<std::uint64_t>()};
    }
    if (j.contains("cost_profile")) c.cost_profile = j.at("cost_profile").get<std::string>();
    if (j.contains("k")) c.k = j.at("k").get<int>();
    if (j.contains("thresholds")) {
        const auto& jt = j.at("thresholds");
        detail::reject_unknown_keys(jt, {"t0", "a", "round_decimals", "full_compute_cutoff"},
                                    "thresholds");
        if (jt.contains("t0")) c.thresholds.t0 = jt.at("t0").get<double>();
        if (jt.contains("a")) c.thresholds.aggressiveness = jt.at("a").get<double>();
        if (jt.contains("round_decimals"))
            c.thresholds.round_decimals = jt.at("round_decimals").get<int>();
        if (jt.contains("full_compute_cutoff"))
            c.thresholds.full_compute_cutoff = jt.at("full_compute_cutoff").get<double>();
    }
    if (j.contains("cache")) {
        const auto& jc = j.at("cache");
        detail::reject_unknown_keys(jc, {"enabled", "bits", "similarity_threshold", "max_pairs"},
                                    "cache");
        if (jc.contains("enabled")) c.cache_enabled = jc.at("enabled").get<bool>();
        if (jc.contains("bits")) c.cache_bits = jc.at("bits").get<int>();
        if (jc.contains("similarity_threshold"))
            c.cache_similarity_threshold = jc.at("similarity_threshold").get<double>();
        if (jc.contains("max_pairs"))
            c.cache_max_pairs = jc.at("max_pairs").get<std::size_t>();
    }
    if (j.contains("subgoal")) {
        const auto& js = j.at("subgoal");
        detail::reject_unknown_keys(js, {"mode", "clearance_deg", "min_depth"}, "subgoal");
        if (js.contains("mode")) c.subgoal_mode = js.at("mode").get<std::string>();
        if (js.contains("clearance_deg"))
            c.scan_clearance_deg = js.at("clearance_deg").get<double>();
        if (js.contains("min_depth")) c.scan_min_depth = js.at("min_depth").get<double>();
    }
    if (j.contains("corruption") && !j.at("corruption").is_null()) {
        const auto& jc = j.at("corruption");
        detail::reject_unknown_keys(jc, {"kind", "severity"}, "corruption");
        CorruptionConfig cc;
        cc.kind = corruption_from_string(jc.at("kind").get<std::string>());
        if (jc.contains("severity")) cc.severity = jc.at("severity").get<int>();
        c.corruption = cc;
    }
    if (j.contains("median_filter")) c.median_filter = j.at("median_filter").get<int>();
    if (j.contains("episodes")) {
        const auto& je = j.at("episodes");
        detail::reject_unknown_keys(
            je, {"count", "seed", "step_limit", "success_radius", "min_hops"}, "episodes");
        if (je.contains("count")) c.suite.count = je.at("count").get<int>();
        if (je.contains("seed")) c.suite.seed = Seed{je.at("seed").get<std::uint64_t>()};
        if (je.contains("step_limit")) c.suite.step_limit = je.at("step_limit").get<int>();
        if (je.contains("success_radius"))
            c.suite.success_radius = je.at("success_radius").get<double>();
        if (je.contains("min_hops")) c.suite.min_hops = je.at("min_hops").get<int>();
    }
    if (j.contains("stop_threshold")) c.stop_threshold = j.at("stop_threshold").get<double>();
    if (j.contains("run_seed")) c.run_seed = Seed{j.at("run_seed").get<std::uint64_t>()};
    if (j.contains("jobs")) c.jobs = j.at("jobs").get<int>();

    c.validate();
    return c;
}

inline nlohmann::ordered_json run_config_to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    if (!c.env.file.empty()) {
        j["env"] = {{"file", c.env.file}};
    } else {
        j["env"] = {{"nodes", c.env.nodes},
                    {"branching", c.env.branching},
                    {"sigma_spatial", c.env.sigma_spatial},
                    {"rho_temporal", c.env.rho_temporal},
                    {"seed", c.env.seed.value}};
    }
    j["encoder"] = {{"layers", c.encoder.layers},   {"image_side", c.encoder.image_side},
                    {"patch", c.encoder.patch},     {"hidden", c.encoder.hidden},
                    {"mlp_dim", c.encoder.mlp_dim}, {"seed", c.encoder.seed.value}};
    j["cost_profile"] = c.cost_profile;
    j["k"] = c.k;
    j["thresholds"] = {{"t0", c.thresholds.t0},
                       {"a", c.thresholds.aggressiveness},
                       {"round_decimals", c.thresholds.round_decimals},
                       {"full_compute_cutoff", c.thresholds.full_compute_cutoff}};
    j["cache"] = {{"enabled", c.cache_enabled},
                  {"bits", c.cache_bits},
                  {"similarity_threshold", c.cache_similarity_threshold},
                  {"max_pairs", c.cache_max_pairs}};
    j["subgoal"] = {{"mode", c.subgoal_mode},
                    {"clearance_deg", c.scan_clearance_deg},
                    {"min_depth", c.scan_min_depth}};
    if (c.corruption) {
        j["corruption"] = {{"kind", corruption_name(c.corruption->kind)},
                           {"severity", c.corruption->severity}};
    } else {
        j["corruption"] = nullptr;
    }
    j["median_filter"] = c.median_filter;
    j["episodes"] = {{"count", c.suite.count},
                     {"seed", c.suite.seed.value},
                     {"step_limit", c.suite.step_limit},
                     {"success_radius", c.suite.success_radius},
                     {"min_hops", c.suite.min_hops}};
    j["stop_threshold"] = c.stop_threshold;
    j["run_seed"] = c.run_seed.value;
    j["jobs"] = c.jobs;
    return j;
}

}  // namespace adanav
