#pragma once

#include <fstream>
#include <iomanip>
#include <string>

#include <json.hpp>

#include "adanav/core/error.hpp"
#include "adanav/simenv/env.hpp"

namespace adanav {

inline constexpr int kEnvSchemaVersion = 1;

// Environment container: self-describing JSON holding the generation
// parameters, graph, and all latents. The file is authoritative on load; no
// regeneration happens.
inline nlohmann::ordered_json env_to_json(const EnvGraph& env) {
    nlohmann::ordered_json j;
    j["schema_version"] = kEnvSchemaVersion;
    j["kind"] = "adanav-env";
    j["params"] = {{"nodes", env.node_count},
                   {"branching", env.branching},
                   {"sigma_spatial", env.sigma_spatial},
                   {"rho_temporal", env.rho_temporal},
                   {"seed", env.seed.value}};
    j["world_side"] = env.world_side;
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const auto& n : env.nodes) {
        nlohmann::ordered_json jn;
        jn["x"] = n.x;
        jn["y"] = n.y;
        jn["neighbors"] = n.neighbors;
        jn["navigable"] = n.navigable;
        nlohmann::ordered_json nfv = nlohmann::ordered_json::array();
        for (int v = 1; v <= kViewsPerPanorama; ++v) nfv.push_back(n.neighbor_for_view[v]);
        jn["neighbor_for_view"] = std::move(nfv);
        nodes.push_back(std::move(jn));
    }
    j["nodes"] = std::move(nodes);
    j["world_locked"] = env.world_locked;
    j["identity"] = env.identity;
    j["latents"] = env.latents;
    return j;
}

inline EnvGraph env_from_json(const nlohmann::json& j) {
    if (!j.contains("kind") || j.at("kind") != "adanav-env")
        throw ConfigError("env file: not an adanav-env container");
    if (j.at("schema_version").get<int>() != kEnvSchemaVersion)
        throw ConfigError("env file: unsupported schema version");

    EnvGraph env;
    const auto& p = j.at("params");
    env.node_count = p.at("nodes").get<int>();
    env.branching = p.at("branching").get<double>();
    env.sigma_spatial = p.at("sigma_spatial").get<double>();
    env.rho_temporal = p.at("rho_temporal").get<double>();
    env.seed = Seed{p.at("seed").get<std::uint64_t>()};
    env.world_side = j.at("world_side").get<double>();

    for (const auto& jn : j.at("nodes")) {
        EnvNode n;
        n.x = jn.at("x").get<double>();
        n.y = jn.at("y").get<double>();
        n.neighbors = jn.at("neighbors").get<std::vector<int>>();
        n.navigable = jn.at("navigable").get<std::vector<int>>();
        n.neighbor_for_view.fill(-1);
        const auto& nfv = jn.at("neighbor_for_view");
        for (int v = 1; v <= kViewsPerPanorama; ++v)
            n.neighbor_for_view[v] = nfv.at(v - 1).get<int>();
        env.nodes.push_back(std::move(n));
    }
    env.world_locked = j.at("world_locked").get<std::vector<bool>>();
    env.identity = j.at("identity").get<std::vector<std::vector<double>>>();
    env.latents = j.at("latents").get<std::vector<std::vector<std::vector<double>>>>();

    if (static_cast<int>(env.nodes.size()) != env.node_count ||
        static_cast<int>(env.latents.size()) != env.node_count)
        throw ConfigError("env file: inconsistent node count");
    return env;
}

inline void save_env(const EnvGraph& env, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open env file for writing: " + path);
    out << env_to_json(env).dump(1) << "\n";
}

inline EnvGraph load_env(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open env file: " + path);
    nlohmann::json j;
    in >> j;
    return env_from_json(j);
}

// Scan fixture files: one scan per line, 360 comma-separated ranges followed
// by the max range.
inline void save_scans(const std::vector<OccupancyScan>& scans, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open scan file for writing: " + path);
    out << std::setprecision(17);
    for (const auto& s : scans) {
        for (double r : s.readings) out << r << ",";
        out << s.max_range << "\n";
    }
}

inline std::vector<OccupancyScan> load_scans(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scan file: " + path);
    std::vector<OccupancyScan> scans;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        OccupancyScan s;
        std::size_t pos = 0;
        std::vector<double> vals;
        while (pos < line.size()) {
            std::size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            vals.push_back(std::stod(line.substr(pos, next - pos)));
            pos = next + 1;
        }
        if (vals.size() != OccupancyScan::kBins + 1)
            throw ConfigError("scan file: expected 361 values per record");
        s.max_range = vals.back();
        vals.pop_back();
        s.readings = std::move(vals);
        s.validate();
        scans.push_back(std::move(s));
    }
    return scans;
}

}  // namespace adanav
