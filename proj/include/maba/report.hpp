#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace maba {

// One verification record. `anchor` is a stable machine-readable check
// identifier so failures are traceable across runs and versions.
struct CheckRecord {
    std::string name;
    std::string anchor;
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

CheckRecord make_record(const std::string& name, const std::string& anchor, double rel_err,
                        double tolerance, double abs_err = -1.0);

struct Report {
    std::string command;
    std::string config_digest;
    std::uint64_t seed = 0;
    int threads = 1;
    std::vector<CheckRecord> records;
    nlohmann::ordered_json payload;  // command-specific output (e.g. solutions)
    double wall_time_ms = 0.0;

    bool pass() const;
    nlohmann::ordered_json to_json() const;
};

std::string fnv1a_hex(const std::string& data);

}  // namespace maba
