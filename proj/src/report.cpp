#include "maba/report.hpp"

namespace maba {

CheckRecord make_record(const std::string& name, const std::string& anchor, double rel_err,
                        double tolerance, double abs_err) {
    CheckRecord r;
    r.name = name;
    r.anchor = anchor;
    r.max_rel_err = rel_err;
    r.max_abs_err = abs_err >= 0.0 ? abs_err : rel_err;
    r.tolerance = tolerance;
    r.pass = rel_err <= tolerance;
    return r;
}

bool Report::pass() const {
    for (const auto& r : records)
        if (!r.pass) return false;
    return true;
}

nlohmann::ordered_json Report::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["config_digest"] = config_digest;
    j["seed"] = seed;
    j["threads"] = threads;
    nlohmann::ordered_json recs = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json rec;
        rec["name"] = r.name;
        rec["anchor"] = r.anchor;
        rec["max_abs_err"] = r.max_abs_err;
        rec["max_rel_err"] = r.max_rel_err;
        rec["tolerance"] = r.tolerance;
        rec["pass"] = r.pass;
        recs.push_back(rec);
    }
    j["records"] = recs;
    if (!payload.is_null()) j["payload"] = payload;
    j["pass"] = pass();
    j["wall_time_ms"] = wall_time_ms;
    return j;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace maba
