#pragma once

// Versioned JSON checkpoints. A checkpoint stores the full sweep config,
// a hash of its semantic fields, the count of contiguously completed work
// units, and every row those units produced -- enough to resume into a
// byte-identical final report.

#include "fivecubes/report.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fivecubes::sweep {

enum class PPolicy { explicit_list, mignotte };

struct SweepConfig {
    std::vector<int> case_ids;
    int64_t r_min = 1;
    int64_t r_max = 1;
    PPolicy p_policy = PPolicy::explicit_list;
    std::vector<unsigned> p_list;
    unsigned k_max = 1000;
    unsigned threads = 1;
    int64_t fallback_w = 1000;
    std::string descent_data_path;
    bool audit = false;
    // non-semantic knobs (excluded from the hash)
    std::string checkpoint_path;
    std::string output_path;
};

namespace detail {

inline nlohmann::json semantic_json(const SweepConfig& c) {
    nlohmann::json j;
    j["case_ids"] = c.case_ids;
    j["r_min"] = c.r_min;
    j["r_max"] = c.r_max;
    j["p_policy"] = c.p_policy == PPolicy::mignotte ? "mignotte" : "explicit";
    j["p_list"] = c.p_list;
    j["k_max"] = c.k_max;
    j["fallback_w"] = c.fallback_w;
    j["descent_data_path"] = c.descent_data_path;
    return j;
}

inline uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace detail

inline std::string config_echo(const SweepConfig& c) { return detail::semantic_json(c).dump(); }

inline std::string config_hash(const SweepConfig& c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a(config_echo(c))));
    return buf;
}

struct Checkpoint {
    SweepConfig config;
    std::string hash;
    size_t units_done = 0;
    std::vector<Row> rows; // rows of the first units_done units
};

inline nlohmann::json to_json(const Checkpoint& c) {
    nlohmann::json j;
    j["version"] = 1;
    j["config_hash"] = c.hash;
    nlohmann::json cfg = detail::semantic_json(c.config);
    cfg["output_path"] = c.config.output_path;
    j["config"] = cfg;
    j["units_done"] = c.units_done;
    nlohmann::json rows = nlohmann::json::array();
    for (const Row& r : c.rows) {
        rows.push_back({r.case_id, r.p, r.r, r.stage, r.verdict, r.witness_q,
                        r.k_used ? long(*r.k_used) : -1L, r.checked_count, r.note});
    }
    j["rows"] = std::move(rows);
    return j;
}

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
    if (!j.contains("version") || j["version"] != 1)
        throw std::runtime_error("checkpoint: unsupported version");
    Checkpoint c;
    const auto& cfg = j.at("config");
    c.config.case_ids = cfg.at("case_ids").get<std::vector<int>>();
    c.config.r_min = cfg.at("r_min").get<int64_t>();
    c.config.r_max = cfg.at("r_max").get<int64_t>();
    c.config.p_policy = cfg.at("p_policy") == "mignotte" ? PPolicy::mignotte : PPolicy::explicit_list;
    c.config.p_list = cfg.at("p_list").get<std::vector<unsigned>>();
    c.config.k_max = cfg.at("k_max").get<unsigned>();
    c.config.fallback_w = cfg.at("fallback_w").get<int64_t>();
    c.config.descent_data_path = cfg.at("descent_data_path").get<std::string>();
    c.config.output_path = cfg.value("output_path", std::string{});
    c.hash = j.at("config_hash").get<std::string>();
    c.units_done = j.at("units_done").get<size_t>();
    for (const auto& row : j.at("rows")) {
        Row r;
        r.case_id = row.at(0).get<int>();
        r.p = row.at(1).get<unsigned>();
        r.r = row.at(2).get<int64_t>();
        r.stage = row.at(3).get<std::string>();
        r.verdict = row.at(4).get<std::string>();
        r.witness_q = row.at(5).get<std::string>();
        const long k = row.at(6).get<long>();
        if (k >= 0) r.k_used = unsigned(k);
        r.checked_count = row.at(7).get<unsigned>();
        r.note = row.at(8).get<std::string>();
        c.rows.push_back(std::move(r));
    }
    if (config_hash(c.config) != c.hash)
        throw std::runtime_error("checkpoint: config hash mismatch, refusing to resume");
    return c;
}

inline void write_checkpoint(const Checkpoint& c, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw std::runtime_error("checkpoint: cannot write " + tmp);
        os << to_json(c).dump(1) << '\n';
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("checkpoint: cannot replace " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
    nlohmann::json j;
    is >> j;
    return checkpoint_from_json(j);
}

} // namespace fivecubes::sweep
