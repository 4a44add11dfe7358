#pragma once

// Tree decomposition of the line graph via min-fill elimination with
// deterministic tie-breaking, plus seeded random restarts, and the
// leaf-peeling translation from decomposition to contraction order.

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "surfsim/network.hpp"

namespace surfsim {

struct TreeDecomposition {
    std::vector<std::set<int>> bags;
    std::vector<int> parent;  // parent[i] = tree parent, -1 for the root
    int root = -1;
    int width = 0;  // max bag size
};

namespace detail {

// Simple graph over index ids: clique per hyperedge, plus a clique over
// the open indices (the virtual tensor of the open-network construction).
inline std::map<int, std::set<int>> moralize(const Hypergraph& hg, const std::vector<int>& open) {
    std::map<int, std::set<int>> adj;
    for (int n : hg.nodes) adj[n];
    auto clique = [&](const std::vector<int>& vs) {
        for (size_t i = 0; i < vs.size(); ++i)
            for (size_t j = i + 1; j < vs.size(); ++j) {
                adj[vs[i]].insert(vs[j]);
                adj[vs[j]].insert(vs[i]);
            }
    };
    for (const auto& e : hg.edges) clique(e);
    clique(open);
    return adj;
}

inline int fill_count(const std::map<int, std::set<int>>& adj, int v) {
    const auto& nb = adj.at(v);
    int missing = 0;
    for (auto it = nb.begin(); it != nb.end(); ++it) {
        auto jt = it;
        for (++jt; jt != nb.end(); ++jt)
            if (!adj.at(*it).count(*jt)) ++missing;
    }
    return missing;
}

}  // namespace detail

// One min-fill elimination pass. `rng` null => deterministic lowest-id
// tie-breaking. Open indices are never eliminated; they end up together in
// the root bag.
inline TreeDecomposition min_fill_decomposition(const Hypergraph& hg, const std::vector<int>& open,
                                                std::mt19937_64* rng = nullptr) {
    auto adj = detail::moralize(hg, open);
    std::set<int> open_set(open.begin(), open.end());
    std::vector<int> order;  // elimination order over closed indices
    std::map<int, int> bag_of;
    TreeDecomposition td;

    std::set<int> remaining;
    for (const auto& [v, nb] : adj)
        if (!open_set.count(v)) remaining.insert(v);

    while (!remaining.empty()) {
        int best = -1, best_fill = -1;
        std::vector<int> ties;
        for (int v : remaining) {
            const int f = detail::fill_count(adj, v);
            if (best == -1 || f < best_fill) {
                best = v;
                best_fill = f;
                ties = {v};
            } else if (f == best_fill) {
                ties.push_back(v);
            }
        }
        int v = ties.front();
        if (rng && ties.size() > 1) v = ties[(*rng)() % ties.size()];

        std::set<int> bag = adj[v];
        bag.insert(v);
        bag_of[v] = static_cast<int>(td.bags.size());
        td.bags.push_back(bag);
        order.push_back(v);

        // Connect neighbors into a clique and remove v.
        for (int a : adj[v])
            for (int b : adj[v])
                if (a != b) adj[a].insert(b);
        for (int a : adj[v]) adj[a].erase(v);
        adj.erase(v);
        remaining.erase(v);
    }

    // Root bag: whatever remains (the open indices and their residual clique).
    std::set<int> root_bag;
    for (const auto& [v, nb] : adj) root_bag.insert(v);
    td.root = static_cast<int>(td.bags.size());
    td.bags.push_back(root_bag);

    // Parent: bag of the first-eliminated member of bag \ {v}; root otherwise.
    std::map<int, int> elim_pos;
    for (size_t i = 0; i < order.size(); ++i) elim_pos[order[i]] = static_cast<int>(i);
    td.parent.assign(td.bags.size(), -1);
    for (size_t i = 0; i < order.size(); ++i) {
        const int v = order[i];
        int parent = td.root;
        int best_pos = -1;
        for (int u : td.bags[i]) {
            if (u == v) continue;
            auto it = elim_pos.find(u);
            if (it == elim_pos.end()) continue;  // open index, lives in root
            if (it->second > static_cast<int>(i) && (best_pos == -1 || it->second < best_pos)) {
                best_pos = it->second;
                parent = bag_of[u];
            }
        }
        td.parent[i] = parent;
    }
    td.width = 0;
    for (const auto& b : td.bags) td.width = std::max(td.width, static_cast<int>(b.size()));
    return td;
}

// Anytime search: restart 0 is the deterministic min-fill pass; further
// restarts randomize tie-breaking from `seed`. Runs at least min_restarts
// and stops when the time budget is exhausted.
inline TreeDecomposition tree_decompose(const Hypergraph& hg, const std::vector<int>& open,
                                        double time_budget_seconds, uint64_t seed,
                                        int min_restarts = 1, int max_restarts = 1 << 20) {
    if (hg.nodes.empty()) throw std::invalid_argument("tree_decompose: empty graph");
    const auto t0 = std::chrono::steady_clock::now();
    TreeDecomposition best = min_fill_decomposition(hg, open, nullptr);
    for (int r = 1; r < max_restarts; ++r) {
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (r >= min_restarts && elapsed >= time_budget_seconds) break;
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * r);
        TreeDecomposition cand = min_fill_decomposition(hg, open, &rng);
        if (cand.width < best.width) best = std::move(cand);
    }
    return best;
}

struct DecompositionReport {
    bool valid = true;
    std::string violation;
};

inline DecompositionReport validate_decomposition(const Hypergraph& hg,
                                                  const std::vector<int>& open,
                                                  const TreeDecomposition& td) {
    DecompositionReport rep;
    // Edge coverage: every hyperedge (and the open set) inside some bag.
    std::vector<std::vector<int>> edges = hg.edges;
    if (!open.empty()) edges.push_back(open);
    for (const auto& e : edges) {
        bool covered = false;
        for (const auto& b : td.bags) {
            bool all = true;
            for (int v : e) all &= b.count(v) > 0;
            if (all) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            rep.valid = false;
            rep.violation = "uncovered hyperedge containing index " + std::to_string(e.front());
            return rep;
        }
    }
    // Node coverage + connectivity of occurrence.
    for (int v : hg.nodes) {
        std::vector<int> holding;
        for (size_t i = 0; i < td.bags.size(); ++i)
            if (td.bags[i].count(v)) holding.push_back(static_cast<int>(i));
        if (holding.empty()) {
            rep.valid = false;
            rep.violation = "index " + std::to_string(v) + " missing from all bags";
            return rep;
        }
        // Connectivity: within the set, every bag except one reaches another
        // member by its parent chain through member bags only.
        std::set<int> hold(holding.begin(), holding.end());
        int roots = 0;
        for (int b : holding) {
            const int p = td.parent[b];
            if (p == -1 || !hold.count(p)) ++roots;
        }
        if (roots != 1) {
            rep.valid = false;
            rep.violation = "occurrence of index " + std::to_string(v) + " is not a connected subtree";
            return rep;
        }
    }
    return rep;
}

// Leaf peeling: root = bag containing the open indices; append each closed
// index when its last holding bag is removed.
inline ContractionPlan plan_from_decomposition(const TreeDecomposition& td,
                                               const std::vector<int>& open) {
    std::set<int> open_set(open.begin(), open.end());
    for (int v : open)
        if (!td.bags[td.root].count(v))
            throw std::invalid_argument("plan_from_decomposition: root bag does not cover the open set");

    std::map<int, int> occurrences;
    for (const auto& b : td.bags)
        for (int v : b) ++occurrences[v];

    const size_t n = td.bags.size();
    std::vector<int> child_count(n, 0);
    for (size_t i = 0; i < n; ++i)
        if (td.parent[i] >= 0) ++child_count[td.parent[i]];

    ContractionPlan plan;
    plan.width = td.width;
    std::vector<bool> removed(n, false);
    std::set<int> leaves;
    for (size_t i = 0; i < n; ++i)
        if (child_count[i] == 0 && static_cast<int>(i) != td.root) leaves.insert(static_cast<int>(i));

    auto emit_exclusive = [&](int bag) {
        std::vector<int> fresh;
        for (int v : td.bags[bag])
            if (--occurrences[v] == 0 && !open_set.count(v)) fresh.push_back(v);
        std::sort(fresh.begin(), fresh.end());
        for (int v : fresh) plan.order.push_back(v);
    };

    while (!leaves.empty()) {
        const int b = *leaves.begin();
        leaves.erase(leaves.begin());
        removed[b] = true;
        emit_exclusive(b);
        const int p = td.parent[b];
        if (p >= 0 && --child_count[p] == 0 && p != td.root) leaves.insert(p);
    }
    emit_exclusive(td.root);
    return plan;
}

// Structural cost estimate: replay the plan on index sets only.
inline double estimate_cost(const Hypergraph& hg, const ContractionPlan& plan) {
    std::vector<std::set<int>> tensors;
    for (const auto& e : hg.edges) tensors.emplace_back(e.begin(), e.end());
    double cost = 0;
    for (int e : plan.order) {
        std::set<int> merged;
        for (auto it = tensors.begin(); it != tensors.end();) {
            if (it->count(e)) {
                merged.insert(it->begin(), it->end());
                it = tensors.erase(it);
            } else {
                ++it;
            }
        }
        merged.erase(e);
        cost += std::pow(2.0, static_cast<double>(merged.size()));
        tensors.push_back(std::move(merged));
    }
    return cost;
}

}  // namespace surfsim
