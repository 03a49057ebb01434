#pragma once

#include <algorithm>
#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "adanav/io/env_file.hpp"
#include "adanav/pipeline/episode.hpp"
#include "adanav/runner/config.hpp"
#include "adanav/simenv/metrics.hpp"

namespace adanav {

inline EnvGraph realize_env(const EnvSource& src) {
    if (!src.file.empty()) return load_env(src.file);
    return generate_env(src.nodes, src.branching, src.sigma_spatial, src.rho_temporal,
                        src.seed);
}

// Deterministic episode specs: (start, goal) pairs at >= min_hops graph hops,
// drawn from the suite seed.
inline std::vector<EpisodeSpec> build_suite(const EnvGraph& env, const SuiteConfig& suite) {
    SeededStream stream(suite.seed);
    std::vector<EpisodeSpec> specs;
    int guard = 0;
    const int max_attempts = suite.count * 2000;
    while (static_cast<int>(specs.size()) < suite.count && guard++ < max_attempts) {
        int start = static_cast<int>(stream.uniform_int(env.node_count));
        int goal = static_cast<int>(stream.uniform_int(env.node_count));
        if (start == goal) continue;
        // hop distance by BFS
        std::vector<int> hops(env.node_count, -1);
        std::vector<int> queue{start};
        hops[start] = 0;
        for (std::size_t qi = 0; qi < queue.size(); ++qi)
            for (int nb : env.nodes[queue[qi]].neighbors)
                if (hops[nb] < 0) {
                    hops[nb] = hops[queue[qi]] + 1;
                    queue.push_back(nb);
                }
        if (hops[goal] < suite.min_hops) continue;
        EpisodeSpec spec;
        spec.start = start;
        spec.goal = goal;
        spec.shortest_path_m = env.shortest_from(start)[goal];
        spec.success_radius = suite.success_radius;
        spec.step_limit = suite.step_limit;
        specs.push_back(spec);
    }
    if (static_cast<int>(specs.size()) < suite.count)
        throw GenError("build_suite: cannot find enough episode pairs at min_hops");
    return specs;
}

struct SuiteResult {
    std::vector<Episode> episodes;
    MetricsReport metrics;
    StepCost gflops;            // summed over all episodes
    CacheStats cache;           // summed
    std::array<std::int64_t, 4> dispositions{};  // full, exited, cached, masked
    int forced_stops = 0;
    int scan_halts = 0;
};

// Runs the suite with episode-level parallelism; results are merged in
// episode-index order so the output is independent of scheduling.
inline SuiteResult run_suite(const EnvGraph& env, const std::vector<EpisodeSpec>& specs,
                             const AgentConfig& agent, const Encoder& encoder, int jobs = 1) {
    std::vector<Episode> episodes(specs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= specs.size()) break;
            episodes[i] = run_episode(env, specs[i], agent, encoder, i);
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    SuiteResult result;
    std::vector<EpisodeMetricInputs> inputs;
    for (const auto& ep : episodes) {
        inputs.push_back(ep.metric_inputs);
        result.gflops += ep.ledger.totals();
        result.cache.hits += ep.cache_stats.hits;
        result.cache.misses += ep.cache_stats.misses;
        result.cache.inserted += ep.cache_stats.inserted;
        result.cache.rejected += ep.cache_stats.rejected;
        result.cache.bytes += ep.cache_stats.bytes;
        result.cache.hash_ops += ep.cache_stats.hash_ops;
        result.cache.min_hit_similarity =
            std::min(result.cache.min_hit_similarity, ep.cache_stats.min_hit_similarity);
        for (const auto& st : ep.steps)
            for (int dcls = 0; dcls < 4; ++dcls)
                result.dispositions[dcls] += st.disposition_counts[dcls];
        if (ep.forced_stop) ++result.forced_stops;
        if (ep.scan_halt) ++result.scan_halts;
    }
    result.metrics = compute_metrics(inputs);
    result.episodes = std::move(episodes);
    return result;
}

inline nlohmann::ordered_json step_cost_json(const StepCost& c) {
    return {{"encoder_gflops", c.encoder_gflops},
            {"policy_gflops", c.policy_gflops},
            {"hash_gflops", c.hash_gflops},
            {"subgoal_gflops", c.subgoal_gflops},
            {"total_gflops", c.total_gflops()}};
}

// Run report: config echo, aggregate metrics, GFLOPs breakdown, cache stats,
// disposition histogram, and per-episode trajectories. The timestamp is the
// single volatile field; everything else is a pure function of the config.
inline nlohmann::ordered_json build_report(const RunConfig& config, const SuiteResult& result,
                                           const std::string& timestamp) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["artifact_version"] = kArtifactVersion;
    j["cost_convention"] = kCostConvention;
    j["timestamp"] = timestamp;
    j["config"] = run_config_to_json(config);

    const auto& agg = result.metrics.aggregate;
    j["aggregate"] = {{"tl", agg.tl}, {"osr", agg.osr}, {"sr", agg.sr},
                      {"spl", agg.spl}, {"gp", agg.gp}};
    j["gflops"] = step_cost_json(result.gflops);

    const double lookups = static_cast<double>(result.cache.hits + result.cache.misses);
    j["cache"] = {{"hits", result.cache.hits},
                  {"misses", result.cache.misses},
                  {"inserted", result.cache.inserted},
                  {"rejected", result.cache.rejected},
                  {"bytes", result.cache.bytes},
                  {"hit_rate", lookups > 0 ? result.cache.hits / lookups : 0.0}};
    if (result.cache.hits > 0)
        j["cache"]["min_hit_similarity"] = result.cache.min_hit_similarity;
    else
        j["cache"]["min_hit_similarity"] = nullptr;
    j["dispositions"] = {{"full", result.dispositions[0]},
                         {"exited", result.dispositions[1]},
                         {"cached", result.dispositions[2]},
                         {"masked", result.dispositions[3]}};
    j["flags"] = {{"forced_stops", result.forced_stops}, {"scan_halts", result.scan_halts}};

    nlohmann::ordered_json eps = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < result.episodes.size(); ++i) {
        const Episode& ep = result.episodes[i];
        const EpisodeMetrics m = result.metrics.per_episode[i];
        nlohmann::ordered_json je;
        je["index"] = i;
        je["start"] = ep.spec.start;
        je["goal"] = ep.spec.goal;
        je["shortest_path_m"] = ep.spec.shortest_path_m;
        je["metrics"] = {{"tl", m.tl}, {"osr", m.osr}, {"sr", m.sr}, {"spl", m.spl},
                         {"gp", m.gp}};
        je["stopped"] = ep.stopped;
        je["forced_stop"] = ep.forced_stop;
        je["scan_halt"] = ep.scan_halt;
        je["gflops"] = step_cost_json(ep.ledger.totals());
        je["cache"] = {{"hits", ep.cache_stats.hits}, {"misses", ep.cache_stats.misses}};
        je["trajectory"] = ep.trajectory;
        nlohmann::ordered_json steps = nlohmann::ordered_json::array();
        for (const auto& st : ep.steps) {
            steps.push_back({{"node", st.node},
                             {"stop", st.action.stop},
                             {"view", st.action.view_index},
                             {"goal_similarity", st.action.goal_similarity},
                             {"dispositions", st.disposition_counts},
                             {"cache_hits", st.cache_hits},
                             {"gflops", st.cost.total_gflops()}});
        }
        je["steps"] = std::move(steps);
        eps.push_back(std::move(je));
    }
    j["episodes"] = std::move(eps);
    return j;
}

struct RunOutput {
    SuiteResult suite;
    nlohmann::ordered_json report;
};

// Full cmd_run path: realize env, build episode suite, run, report.
inline RunOutput execute_run(const RunConfig& config, const std::string& timestamp = "") {
    config.validate();
    EnvGraph env = realize_env(config.env);
    std::vector<EpisodeSpec> specs = build_suite(env, config.suite);
    Encoder encoder(config.encoder);
    RunOutput out;
    out.suite = run_suite(env, specs, config.agent(), encoder, config.jobs);
    out.report = build_report(config, out.suite, timestamp);
    return out;
}

// Human-readable aggregate line in the style of the evaluation tables.
inline std::string format_report_row(const std::string& label,
                                     const nlohmann::ordered_json& report) {
    const auto& a = report.at("aggregate");
    const auto& g = report.at("gflops");
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%-24s TL %7.2f  OSR %5.3f  SR %5.3f  SPL %5.3f  GP %6.2f  GFLOPs %12.2f",
                  label.c_str(), a.at("tl").get<double>(), a.at("osr").get<double>(),
                  a.at("sr").get<double>(), a.at("spl").get<double>(),
                  a.at("gp").get<double>(), g.at("total_gflops").get<double>());
    return std::string(buf);
}

}  // namespace adanav
