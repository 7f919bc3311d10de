#include "maba/config.hpp"

#include <fstream>

#include "maba/prng.hpp"

namespace maba {

namespace {

cx parse_complex(const nlohmann::ordered_json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(path + ": expected a complex number as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::ordered_json emit_complex(cx z) {
    return nlohmann::ordered_json::array({z.real(), z.imag()});
}

const nlohmann::ordered_json& field(const nlohmann::ordered_json& j, const std::string& key,
                                    const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path + "." + key + ": missing");
    return *it;
}

}  // namespace

RunConfig parse_config(const nlohmann::ordered_json& j) {
    RunConfig cfg;
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    const auto& model = field(j, "model", "config");
    if (!model.is_object()) throw ConfigError("config.model: expected an object");

    const auto& sites = field(model, "sites", "config.model");
    if (!sites.is_number_integer() || sites.get<int>() < 1)
        throw ConfigError("config.model.sites: expected a positive integer");
    cfg.model.sites = sites.get<int>();

    cfg.model.c = parse_complex(field(model, "c", "config.model"), "config.model.c");

    const auto& theta = field(model, "theta", "config.model");
    if (!theta.is_array()) throw ConfigError("config.model.theta: expected an array");
    for (std::size_t i = 0; i < theta.size(); ++i)
        cfg.model.theta.push_back(
            parse_complex(theta[i], "config.model.theta[" + std::to_string(i) + "]"));

    cfg.model.kappa_tilde =
        parse_complex(field(model, "kappa_tilde", "config.model"), "config.model.kappa_tilde");
    cfg.model.kappa = parse_complex(field(model, "kappa", "config.model"), "config.model.kappa");
    cfg.model.kappa_plus =
        parse_complex(field(model, "kappa_plus", "config.model"), "config.model.kappa_plus");
    cfg.model.kappa_minus =
        parse_complex(field(model, "kappa_minus", "config.model"), "config.model.kappa_minus");

    if (auto it = model.find("rho1"); it != model.end()) {
        if (it->is_string() && it->get<std::string>() == "auto")
            cfg.rho1_auto = true;
        else
            cfg.model.rho1 = parse_complex(*it, "config.model.rho1");
    } else {
        cfg.rho1_auto = true;
    }
    if (auto it = model.find("theta_gap_rel"); it != model.end()) {
        if (!it->is_number()) throw ConfigError("config.model.theta_gap_rel: expected a number");
        cfg.model.theta_gap_rel = it->get<double>();
    }
    if (auto it = model.find("pole_guard_rel"); it != model.end()) {
        if (!it->is_number()) throw ConfigError("config.model.pole_guard_rel: expected a number");
        cfg.model.pole_guard_rel = it->get<double>();
    }

    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_unsigned()) throw ConfigError("config.seed: expected an unsigned integer");
        cfg.seed = it->get<std::uint64_t>();
    }
    if (auto it = j.find("threads"); it != j.end()) {
        if (!it->is_number_integer() || it->get<int>() < 1)
            throw ConfigError("config.threads: expected a positive integer");
        cfg.threads = it->get<int>();
    }
    if (auto it = j.find("tolerances"); it != j.end()) {
        if (!it->is_object()) throw ConfigError("config.tolerances: expected an object");
        for (auto& [k, v] : it->items()) {
            if (!v.is_number()) throw ConfigError("config.tolerances." + k + ": expected a number");
            cfg.tolerances[k] = v.get<double>();
        }
    }
    if (auto it = j.find("caps"); it != j.end()) {
        if (!it->is_object()) throw ConfigError("config.caps: expected an object");
        for (auto& [k, v] : it->items()) {
            if (!v.is_number_integer()) throw ConfigError("config.caps." + k + ": expected an integer");
            cfg.caps[k] = v.get<int>();
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_config(j);
}

nlohmann::ordered_json emit_config(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json model;
    model["sites"] = cfg.model.sites;
    model["c"] = emit_complex(cfg.model.c);
    nlohmann::ordered_json theta = nlohmann::ordered_json::array();
    for (cx t : cfg.model.theta) theta.push_back(emit_complex(t));
    model["theta"] = theta;
    model["kappa_tilde"] = emit_complex(cfg.model.kappa_tilde);
    model["kappa"] = emit_complex(cfg.model.kappa);
    model["kappa_plus"] = emit_complex(cfg.model.kappa_plus);
    model["kappa_minus"] = emit_complex(cfg.model.kappa_minus);
    if (cfg.rho1_auto)
        model["rho1"] = "auto";
    else
        model["rho1"] = emit_complex(cfg.model.rho1);
    model["theta_gap_rel"] = cfg.model.theta_gap_rel;
    model["pole_guard_rel"] = cfg.model.pole_guard_rel;
    j["model"] = model;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    nlohmann::ordered_json tols = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg.tolerances) tols[k] = v;
    j["tolerances"] = tols;
    nlohmann::ordered_json caps = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg.caps) caps[k] = v;
    j["caps"] = caps;
    return j;
}

Model model_from_config(const RunConfig& cfg) {
    ModelParams params = cfg.model;
    if (cfg.rho1_auto) {
        Prng rng = Prng(cfg.seed).stream("rho1");
        for (int attempt = 0; attempt < 128; ++attempt) {
            params.rho1 = rng.complex_annulus(0.5, 2.0);
            try {
                return Model::make(params);
            } catch (const DegenerateTwist&) {
                continue;
            }
        }
        throw DegenerateTwist("could not draw a valid rho1 gauge from the seed");
    }
    return Model::make(params);
}

ParamSet load_roots(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open root file: " + path);
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("root file parse error in " + path + ": " + e.what());
    }
    if (!j.is_array()) throw ConfigError(path + ": expected a JSON array of [re, im] pairs");
    ParamSet out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_complex(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

nlohmann::ordered_json roots_to_json(std::span<const cx> roots) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (cx r : roots) out.push_back(emit_complex(r));
    return out;
}

}  // namespace maba
