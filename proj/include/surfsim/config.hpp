#pragma once

// Run configuration: a single JSON document with every knob overridable and
// unknown keys rejected. Round-trips exactly (parse -> serialize -> parse).

#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "surfsim/experiment.hpp"

namespace surfsim {

struct RunConfig {
    NoiseParameters noise;
    int rounds = 1;
    CrosstalkSpec crosstalk;  // kt_region 0 = crosstalk off
    EngineOptions engine;
    bool expose_final_round = true;
    bool pipelined = true;
    bool fast_cycle = false;  // use tau_m_fast / tau_d_fast
    std::string output_directory = "out";
    std::vector<std::string> formats = {"json", "csv", "txt"};
    std::vector<double> sweep_k_values;
    std::pair<QubitId, QubitId> moving_pair = {QubitId{3, 3, QubitRole::X_ANCILLA},
                                               QubitId{2, 4, QubitRole::DATA}};
    std::vector<double> moving_t1_values = {30000.0, 10000.0, 3000.0};

    NoiseParameters effective_noise() const {
        NoiseParameters p = noise;
        if (fast_cycle) {
            p.tau_m = p.tau_m_fast;
            p.tau_d = p.tau_d_fast;
        }
        return p;
    }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

inline QubitId parse_qubit(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("config: qubit must be a coordinate pair");
    const Surface17 s = surface17_layout();
    const int x = j[0].get<int>(), y = j[1].get<int>();
    for (const auto& q : s.data)
        if (q.x == x && q.y == y) return q;
    for (const auto& q : s.x_ancillas)
        if (q.x == x && q.y == y) return q;
    for (const auto& q : s.z_ancillas)
        if (q.x == x && q.y == y) return q;
    throw std::invalid_argument("config: (" + std::to_string(x) + "," + std::to_string(y) +
                                ") is not a layout qubit");
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
    RunConfig c;
    detail::reject_unknown_keys(j, {"noise", "rounds", "crosstalk", "engine", "experiment",
                                    "output", "sweep", "moving"},
                                "top level");
    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        detail::reject_unknown_keys(
            n,
            {"T1", "T_phi", "T_g1Q", "T_g2Q", "tau_c", "tau_d", "tau_d_fast", "tau_m",
             "tau_m_fast", "p_axis", "p_plane", "eps_RO", "kappa", "chi", "alpha0", "k_xtalk"},
            "noise");
        auto get = [&](const char* k, double& v) {
            if (n.contains(k)) v = n.at(k).get<double>();
        };
        get("T1", c.noise.T1);
        get("T_phi", c.noise.T_phi);
        get("T_g1Q", c.noise.T_g1Q);
        get("T_g2Q", c.noise.T_g2Q);
        get("tau_c", c.noise.tau_c);
        get("tau_d", c.noise.tau_d);
        get("tau_d_fast", c.noise.tau_d_fast);
        get("tau_m", c.noise.tau_m);
        get("tau_m_fast", c.noise.tau_m_fast);
        get("p_axis", c.noise.p_axis);
        get("p_plane", c.noise.p_plane);
        get("eps_RO", c.noise.eps_RO);
        get("kappa", c.noise.kappa);
        get("chi", c.noise.chi);
        get("alpha0", c.noise.alpha0);
        get("k_xtalk", c.noise.k_xtalk);
        if (c.noise.T1 <= 0 || c.noise.T_phi <= 0)
            throw std::invalid_argument("config: T1 and T_phi must be positive");
        for (double prob : {c.noise.p_axis, c.noise.p_plane, c.noise.eps_RO})
            if (prob < 0 || prob > 1)
                throw std::invalid_argument("config: probabilities must be in [0,1]");
    }
    if (j.contains("rounds")) {
        c.rounds = j.at("rounds").get<int>();
        if (c.rounds < 1) throw std::invalid_argument("config: rounds must be >= 1");
    }
    if (j.contains("crosstalk")) {
        const auto& x = j.at("crosstalk");
        detail::reject_unknown_keys(
            x, {"kt_region", "pairs", "compensated", "gated_only", "moved_pair", "moved_fraction"},
            "crosstalk");
        if (x.contains("kt_region")) c.crosstalk.kt_region = x.at("kt_region").get<double>();
        if (x.contains("compensated")) c.crosstalk.compensated = x.at("compensated").get<bool>();
        if (x.contains("gated_only")) c.crosstalk.gated_only = x.at("gated_only").get<bool>();
        if (x.contains("pairs"))
            for (const auto& pr : x.at("pairs"))
                c.crosstalk.pairs.emplace_back(detail::parse_qubit(pr.at(0)),
                                               detail::parse_qubit(pr.at(1)));
        if (x.contains("moved_pair")) {
            const auto& mp = x.at("moved_pair");
            c.crosstalk.moved_pair = {detail::parse_qubit(mp.at(0)), detail::parse_qubit(mp.at(1))};
        }
        if (x.contains("moved_fraction"))
            c.crosstalk.moved_fraction = x.at("moved_fraction").get<double>();
    }
    if (j.contains("engine")) {
        const auto& e = j.at("engine");
        detail::reject_unknown_keys(e,
                                    {"workers", "width_cap", "max_split_edges", "max_entries",
                                     "plan_cache", "seed", "plan_budget_seconds", "min_restarts",
                                     "max_restarts", "store_per_syndrome"},
                                    "engine");
        if (e.contains("workers")) c.engine.workers = e.at("workers").get<int>();
        if (e.contains("width_cap")) c.engine.width_cap = e.at("width_cap").get<int>();
        if (e.contains("max_split_edges"))
            c.engine.max_split_edges = e.at("max_split_edges").get<int>();
        if (e.contains("max_entries")) c.engine.max_entries = e.at("max_entries").get<size_t>();
        if (e.contains("plan_cache")) c.engine.plan_cache_dir = e.at("plan_cache").get<std::string>();
        if (e.contains("seed")) c.engine.seed = e.at("seed").get<uint64_t>();
        if (e.contains("plan_budget_seconds"))
            c.engine.plan_budget_seconds = e.at("plan_budget_seconds").get<double>();
        if (e.contains("min_restarts")) c.engine.min_restarts = e.at("min_restarts").get<int>();
        if (e.contains("max_restarts")) c.engine.max_restarts = e.at("max_restarts").get<int>();
        if (e.contains("store_per_syndrome"))
            c.engine.store_per_syndrome = e.at("store_per_syndrome").get<bool>();
        if (c.engine.workers < 0)
            throw std::invalid_argument("config: workers must be >= 0 (0 = auto)");
    }
    if (j.contains("experiment")) {
        const auto& e = j.at("experiment");
        detail::reject_unknown_keys(e, {"expose_final_round", "pipelined", "fast_cycle"}, "experiment");
        if (e.contains("expose_final_round"))
            c.expose_final_round = e.at("expose_final_round").get<bool>();
        if (e.contains("pipelined")) c.pipelined = e.at("pipelined").get<bool>();
        if (e.contains("fast_cycle")) c.fast_cycle = e.at("fast_cycle").get<bool>();
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        detail::reject_unknown_keys(o, {"directory", "formats"}, "output");
        if (o.contains("directory")) c.output_directory = o.at("directory").get<std::string>();
        if (o.contains("formats")) {
            c.formats = o.at("formats").get<std::vector<std::string>>();
            for (const auto& f : c.formats)
                if (f != "json" && f != "csv" && f != "txt")
                    throw std::invalid_argument("config: unknown output format '" + f + "'");
        }
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        detail::reject_unknown_keys(s, {"k_values"}, "sweep");
        if (s.contains("k_values")) c.sweep_k_values = s.at("k_values").get<std::vector<double>>();
    }
    if (j.contains("moving")) {
        const auto& m = j.at("moving");
        detail::reject_unknown_keys(m, {"pair", "t1_values"}, "moving");
        if (m.contains("pair")) {
            const auto& pr = m.at("pair");
            c.moving_pair = {detail::parse_qubit(pr.at(0)), detail::parse_qubit(pr.at(1))};
        }
        if (m.contains("t1_values"))
            c.moving_t1_values = m.at("t1_values").get<std::vector<double>>();
    }
    return c;
}

inline nlohmann::json serialize_config(const RunConfig& c) {
    nlohmann::json j;
    j["noise"] = {{"T1", c.noise.T1},
                  {"T_phi", c.noise.T_phi},
                  {"T_g1Q", c.noise.T_g1Q},
                  {"T_g2Q", c.noise.T_g2Q},
                  {"tau_c", c.noise.tau_c},
                  {"tau_d", c.noise.tau_d},
                  {"tau_d_fast", c.noise.tau_d_fast},
                  {"tau_m", c.noise.tau_m},
                  {"tau_m_fast", c.noise.tau_m_fast},
                  {"p_axis", c.noise.p_axis},
                  {"p_plane", c.noise.p_plane},
                  {"eps_RO", c.noise.eps_RO},
                  {"kappa", c.noise.kappa},
                  {"chi", c.noise.chi},
                  {"alpha0", c.noise.alpha0},
                  {"k_xtalk", c.noise.k_xtalk}};
    j["rounds"] = c.rounds;
    nlohmann::json x{{"kt_region", c.crosstalk.kt_region},
                     {"compensated", c.crosstalk.compensated},
                     {"gated_only", c.crosstalk.gated_only},
                     {"moved_fraction", c.crosstalk.moved_fraction}};
    if (!c.crosstalk.pairs.empty()) {
        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& pr : c.crosstalk.pairs)
            pairs.push_back({{pr.first.x, pr.first.y}, {pr.second.x, pr.second.y}});
        x["pairs"] = pairs;
    }
    if (c.crosstalk.moved_pair)
        x["moved_pair"] = {{c.crosstalk.moved_pair->first.x, c.crosstalk.moved_pair->first.y},
                           {c.crosstalk.moved_pair->second.x, c.crosstalk.moved_pair->second.y}};
    j["crosstalk"] = x;
    j["engine"] = {{"workers", c.engine.workers},
                   {"width_cap", c.engine.width_cap},
                   {"max_split_edges", c.engine.max_split_edges},
                   {"max_entries", c.engine.max_entries},
                   {"plan_cache", c.engine.plan_cache_dir},
                   {"seed", c.engine.seed},
                   {"plan_budget_seconds", c.engine.plan_budget_seconds},
                   {"min_restarts", c.engine.min_restarts},
                   {"max_restarts", c.engine.max_restarts},
                   {"store_per_syndrome", c.engine.store_per_syndrome}};
    j["experiment"] = {{"expose_final_round", c.expose_final_round},
                     {"pipelined", c.pipelined},
                     {"fast_cycle", c.fast_cycle}};
    j["output"] = {{"directory", c.output_directory}, {"formats", c.formats}};
    j["sweep"] = {{"k_values", c.sweep_k_values}};
    j["moving"] = {{"pair", {{c.moving_pair.first.x, c.moving_pair.first.y},
                             {c.moving_pair.second.x, c.moving_pair.second.y}}},
                   {"t1_values", c.moving_t1_values}};
    return j;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return parse_config(j);
}

}  // namespace surfsim
