// adanav: input-adaptive panoramic navigation simulator and benchmark CLI.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "adanav/io/env_file.hpp"
#include "adanav/runner/config.hpp"
#include "adanav/runner/runner.hpp"
#include "adanav/runner/sweeps.hpp"

namespace {

using adanav::ConfigError;
using adanav::RunConfig;

std::string default_out_dir() {
    const char* dir = std::getenv("ADANAV_OUT_DIR");
    return dir ? std::string(dir) : std::string(".");
}

std::string out_path(const std::string& path) {
    if (path.empty() || path.front() == '/' || path.find('/') != std::string::npos)
        return path;
    return default_out_dir() + "/" + path;
}

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return std::string(buf);
}

void emit_error(const std::string& kind, const std::string& message) {
    nlohmann::ordered_json rec = {{"error", kind}, {"message", message}};
    std::cerr << rec.dump() << "\n";
}

RunConfig load_run_config(const std::string& config_path) {
    if (config_path.empty()) return RunConfig{};
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file: " + config_path);
    nlohmann::json j;
    in >> j;
    return adanav::run_config_from_json(j);
}

struct Overrides {
    std::optional<int> k;
    std::optional<double> a;
    std::optional<bool> cache;
    std::optional<double> cache_sim;
    std::optional<std::string> subgoal_mode;
    std::optional<std::string> corruption;
    std::optional<int> severity;
    std::optional<int> median_filter;
    std::optional<int> episodes;
    std::optional<std::uint64_t> suite_seed;
    std::optional<std::uint64_t> run_seed;
    std::optional<int> step_limit;
    std::optional<double> stop_threshold;
    std::optional<std::string> env_file;
    std::optional<int> jobs;

    void apply(RunConfig& c) const {
        if (k) c.k = *k;
        if (a) c.thresholds.aggressiveness = *a;
        if (cache) c.cache_enabled = *cache;
        if (cache_sim) c.cache_similarity_threshold = *cache_sim;
        if (subgoal_mode) c.subgoal_mode = *subgoal_mode;
        if (corruption) {
            if (*corruption == "none") {
                c.corruption.reset();
            } else {
                adanav::CorruptionConfig cc;
                cc.kind = adanav::corruption_from_string(*corruption);
                cc.severity = severity.value_or(c.corruption ? c.corruption->severity : 3);
                c.corruption = cc;
            }
        } else if (severity && c.corruption) {
            c.corruption->severity = *severity;
        }
        if (median_filter) c.median_filter = *median_filter;
        if (episodes) c.suite.count = *episodes;
        if (suite_seed) c.suite.seed = adanav::Seed{*suite_seed};
        if (run_seed) c.run_seed = adanav::Seed{*run_seed};
        if (step_limit) c.suite.step_limit = *step_limit;
        if (stop_threshold) c.stop_threshold = *stop_threshold;
        if (env_file) c.env.file = *env_file;
        if (jobs) c.jobs = *jobs;
        c.validate();
    }
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--k", ov.k, "k-extension width");
    cmd->add_option("--a", ov.a, "threshold aggressiveness A (absolute units)");
    cmd->add_option("--cache", ov.cache, "enable/disable the SimHash cache");
    cmd->add_option("--cache-similarity", ov.cache_sim, "cache reuse similarity threshold");
    cmd->add_option("--subgoal-mode", ov.subgoal_mode, "graph or scan");
    cmd->add_option("--corruption", ov.corruption,
                    "none|speckle|low_light|defocus|motion_blur");
    cmd->add_option("--severity", ov.severity, "corruption severity 1..5");
    cmd->add_option("--median-filter", ov.median_filter, "median filter kernel (0 = off)");
    cmd->add_option("--episodes", ov.episodes, "episode count");
    cmd->add_option("--suite-seed", ov.suite_seed, "episode suite seed");
    cmd->add_option("--run-seed", ov.run_seed, "run seed");
    cmd->add_option("--step-limit", ov.step_limit, "episode step limit");
    cmd->add_option("--stop-threshold", ov.stop_threshold, "policy stop threshold");
    cmd->add_option("--env-file", ov.env_file, "environment file to load");
    cmd->add_option("--jobs", ov.jobs, "episode-level parallelism");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"input-adaptive panoramic navigation benchmark"};
    app.require_subcommand(1);

    // gen-env
    auto* gen = app.add_subcommand("gen-env", "generate a procedural environment file");
    int gen_nodes = 40;
    double gen_branching = 5.0, gen_sigma = 0.3, gen_rho = 0.8;
    std::uint64_t gen_seed = 11;
    std::string gen_out = "env.json";
    gen->add_option("--nodes", gen_nodes, "node count");
    gen->add_option("--branching", gen_branching, "target mean degree");
    gen->add_option("--sigma-spatial", gen_sigma, "intra-panorama view correlation [0,1]");
    gen->add_option("--rho-temporal", gen_rho, "world-locked view fraction [0,1]");
    gen->add_option("--seed", gen_seed, "environment seed");
    gen->add_option("-o,--output", gen_out, "output file");

    // run
    auto* run = app.add_subcommand("run", "run a benchmark suite and write a report");
    std::string run_config_path, run_out = "report.json";
    Overrides run_ov;
    run->add_option("-c,--config", run_config_path, "run configuration JSON file");
    run->add_option("-o,--output", run_out, "report output file");
    add_override_flags(run, run_ov);

    // ablate
    auto* ablate = app.add_subcommand("ablate", "sweep one parameter over a grid");
    std::string ab_config_path, ab_param, ab_out = "ablation.csv";
    std::vector<double> ab_values;
    Overrides ab_ov;
    ablate->add_option("-c,--config", ab_config_path, "base configuration JSON file");
    ablate->add_option("--param", ab_param, "k | a | cache_similarity | rho_temporal")
        ->required();
    ablate->add_option("--values", ab_values, "grid values")->required()->expected(-1);
    ablate->add_option("-o,--output", ab_out, "CSV output file");
    add_override_flags(ablate, ab_ov);

    // corrupt-suite
    auto* corr = app.add_subcommand("corrupt-suite", "run the corruption study");
    std::string co_config_path, co_out = "corruptions.csv";
    bool co_filter = false;
    Overrides co_ov;  // --severity from the shared flags selects the study severity
    corr->add_option("-c,--config", co_config_path, "base configuration JSON file");
    corr->add_flag("--with-median-filter", co_filter, "add median-filtered rows");
    corr->add_option("-o,--output", co_out, "CSV output file");
    add_override_flags(corr, co_ov);

    // saturation
    auto* sat = app.add_subcommand("saturation", "emit the layer-saturation curve");
    int sat_samples = 16;
    std::uint64_t sat_seed = 7;
    std::string sat_out = "saturation.csv";
    sat->add_option("--samples", sat_samples, "number of sample images");
    sat->add_option("--seed", sat_seed, "sample seed");
    sat->add_option("-o,--output", sat_out, "CSV output file");

    // report
    auto* rep = app.add_subcommand("report", "pretty-print a stored report");
    std::string rep_in;
    rep->add_option("report_file", rep_in, "report JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            adanav::EnvGraph env = adanav::generate_env(gen_nodes, gen_branching, gen_sigma,
                                                        gen_rho, adanav::Seed{gen_seed});
            adanav::save_env(env, out_path(gen_out));
            std::cout << "wrote " << out_path(gen_out) << " (" << env.node_count
                      << " nodes, world side " << env.world_side << " m)\n";
        } else if (run->parsed()) {
            RunConfig config = load_run_config(run_config_path);
            run_ov.apply(config);
            adanav::RunOutput out = adanav::execute_run(config, iso_timestamp());
            write_text(out_path(run_out), out.report.dump(1) + "\n");
            std::cout << adanav::format_report_row("run", out.report) << "\n";
            std::cout << "wrote " << out_path(run_out) << "\n";
        } else if (ablate->parsed()) {
            RunConfig config = load_run_config(ab_config_path);
            ab_ov.apply(config);
            std::string csv = adanav::run_ablation(config, ab_param, ab_values);
            write_text(out_path(ab_out), csv);
            std::cout << csv;
            std::cout << "wrote " << out_path(ab_out) << "\n";
        } else if (corr->parsed()) {
            RunConfig config = load_run_config(co_config_path);
            const int co_severity = co_ov.severity.value_or(3);
            Overrides ov = co_ov;
            ov.severity.reset();  // applied per row by the suite itself
            ov.apply(config);
            std::string csv = adanav::run_corruption_suite(config, co_severity, co_filter);
            write_text(out_path(co_out), csv);
            std::cout << csv;
            std::cout << "wrote " << out_path(co_out) << "\n";
        } else if (sat->parsed()) {
            std::string csv = adanav::run_saturation(adanav::EncoderConfig::desk(),
                                                     sat_samples, adanav::Seed{sat_seed});
            write_text(out_path(sat_out), csv);
            std::cout << csv;
            std::cout << "wrote " << out_path(sat_out) << "\n";
        } else if (rep->parsed()) {
            std::ifstream in(rep_in);
            if (!in) throw ConfigError("cannot open report file: " + rep_in);
            nlohmann::ordered_json j;
            in >> j;
            std::cout << adanav::format_report_row(rep_in, j) << "\n";
            const auto& d = j.at("dispositions");
            std::cout << "dispositions: full " << d.at("full") << ", exited " << d.at("exited")
                      << ", cached " << d.at("cached") << ", masked " << d.at("masked")
                      << "\n";
            const auto& c = j.at("cache");
            std::cout << "cache: hits " << c.at("hits") << ", misses " << c.at("misses")
                      << ", hit_rate " << c.at("hit_rate") << ", bytes " << c.at("bytes")
                      << "\n";
            std::cout << "convention: " << j.at("cost_convention").get<std::string>() << "\n";
        }
    } catch (const ConfigError& e) {
        emit_error("ConfigError", e.what());
        return 2;
    } catch (const adanav::GenError& e) {
        emit_error("GenError", e.what());
        return 2;
    } catch (const adanav::Error& e) {
        emit_error(typeid(e).name(), e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error("RuntimeError", e.what());
        return 3;
    }
    return 0;
}
