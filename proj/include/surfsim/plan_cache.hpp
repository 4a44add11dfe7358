#pragma once

// Disk-backed contraction plan cache keyed by the structural hash of the
// network hypergraph. Circuits sharing a structure (same schedule, other
// noise parameters) reuse the cached order without re-planning.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "surfsim/network.hpp"

namespace surfsim {

inline uint64_t structural_hash(const TensorNetwork& net) {
    uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&](uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    for (const auto& [id, t] : net.nodes) {
        mix(0xa5a5a5a5ull);
        for (int idx : t.indices) mix(static_cast<uint64_t>(idx) + 1);
    }
    mix(0x5a5a5a5aull);
    for (int idx : net.open_indices) mix(static_cast<uint64_t>(idx) + 1);
    return h;
}

// When split_edges is non-empty, `plan` is the per-subtask plan for the
// network with those indices fixed.
struct ExecutionRecipe {
    ContractionPlan plan;
    std::vector<int> split_edges;
};

class PlanCache {
public:
    explicit PlanCache(std::string dir) : dir_(std::move(dir)) {
        if (!dir_.empty()) std::filesystem::create_directories(dir_);
    }

    std::optional<ExecutionRecipe> load(uint64_t key) const {
        if (dir_.empty()) return std::nullopt;
        std::ifstream in(path(key));
        if (!in) return std::nullopt;
        nlohmann::json j;
        in >> j;
        ExecutionRecipe r;
        r.plan.order = j.at("order").get<std::vector<int>>();
        r.plan.width = j.at("width").get<int>();
        r.plan.estimated_cost = j.value("estimated_cost", 0.0);
        r.split_edges = j.value("split_edges", std::vector<int>{});
        return r;
    }

    void store(uint64_t key, const ExecutionRecipe& r) const {
        if (dir_.empty()) return;
        nlohmann::json j{{"order", r.plan.order},
                         {"width", r.plan.width},
                         {"estimated_cost", r.plan.estimated_cost},
                         {"split_edges", r.split_edges}};
        std::ofstream out(path(key));
        out << j.dump();
    }

private:
    std::string path(uint64_t key) const {
        return dir_ + "/plan-" + std::to_string(key) + ".json";
    }
    std::string dir_;
};

}  // namespace surfsim
