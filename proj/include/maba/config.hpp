#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "maba/params.hpp"

namespace maba {

// Batch configuration. Complex numbers are serialized as [re, im] pairs;
// emission is canonical, so emit -> parse -> emit is byte-identical.
struct RunConfig {
    ModelParams model;
    bool rho1_auto = false;  // rho1 drawn from the seed, avoiding excluded points
    std::uint64_t seed = 1;
    int threads = 1;
    std::map<std::string, double> tolerances;
    std::map<std::string, int> caps;

    double tol(const std::string& key, double fallback) const {
        auto it = tolerances.find(key);
        return it == tolerances.end() ? fallback : it->second;
    }
    int cap(const std::string& key, int fallback) const {
        auto it = caps.find(key);
        return it == caps.end() ? fallback : it->second;
    }
};

// Throws ConfigError with the offending field path in the message.
RunConfig parse_config(const nlohmann::ordered_json& j);
RunConfig load_config(const std::string& path);
nlohmann::ordered_json emit_config(const RunConfig& cfg);

// Builds the validated model; draws rho1 from the seed when rho1_auto.
Model model_from_config(const RunConfig& cfg);

// Root files are JSON lists of [re, im] pairs.
ParamSet load_roots(const std::string& path);
nlohmann::ordered_json roots_to_json(std::span<const cx> roots);

}  // namespace maba
