#pragma once

// Tensor networks as multi-hypergraphs: nodes carry tensors, hyperedges
// are shared indices, a subset of indices is left open.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "surfsim/tensor.hpp"

namespace surfsim {

struct Hypergraph {
    std::vector<int> nodes;              // index ids
    std::vector<std::vector<int>> edges; // one per tensor: its index ids
};

struct TensorNetwork {
    std::map<int, Tensor> nodes;                 // node id -> tensor
    std::map<int, std::vector<int>> hyperedges;  // index id -> adjacent node ids
    std::vector<int> open_indices;
    int next_index_id = 0;
    int next_node_id = 0;

    int new_index() { return next_index_id++; }

    int add_tensor(Tensor t) {
        const int id = next_node_id++;
        for (int idx : t.indices) hyperedges[idx].push_back(id);
        nodes.emplace(id, std::move(t));
        return id;
    }

    std::vector<int> closed_indices() const {
        std::vector<int> out;
        std::set<int> open(open_indices.begin(), open_indices.end());
        for (const auto& [idx, adj] : hyperedges)
            if (!open.count(idx)) out.push_back(idx);
        return out;
    }
};

// One line-graph node per index; one hyperedge per tensor over its indices.
inline Hypergraph line_graph(const TensorNetwork& net) {
    Hypergraph hg;
    for (const auto& [idx, adj] : net.hyperedges) hg.nodes.push_back(idx);
    for (const auto& [id, t] : net.nodes) hg.edges.push_back(t.indices);
    return hg;
}

// Fix index `edge` to `value`: slice adjacent tensors and drop the edge.
inline TensorNetwork fix_index(const TensorNetwork& net, int edge, int value) {
    auto it = net.hyperedges.find(edge);
    if (it == net.hyperedges.end()) throw std::invalid_argument("fix_index: unknown edge");
    TensorNetwork out = net;
    for (int node : it->second) {
        Tensor& t = out.nodes.at(node);
        // An index can occur once per tensor by construction.
        t = t.fixed(edge, value);
    }
    out.hyperedges.erase(edge);
    out.open_indices.erase(std::remove(out.open_indices.begin(), out.open_indices.end(), edge),
                           out.open_indices.end());
    return out;
}

struct ContractionPlan {
    std::vector<int> order;  // closed index ids in elimination order
    int width = 0;           // max bag size of the source decomposition
    double estimated_cost = 0.0;
};

struct ContractOptions {
    size_t max_entries = size_t(1) << 30;  // per-tensor entry cap
    bool check_replay_width = true;
};

// Contract the closed indices in plan order; returns the tensor over the
// open indices, reordered to net.open_indices.
inline Tensor contract(const TensorNetwork& net, const ContractionPlan& plan,
                       const ContractOptions& opts = {}) {
    {
        std::set<int> planned(plan.order.begin(), plan.order.end());
        std::vector<int> closed = net.closed_indices();
        if (planned.size() != plan.order.size() || planned.size() != closed.size())
            throw std::invalid_argument("contract: plan does not cover exactly the closed indices");
        for (int c : closed)
            if (!planned.count(c))
                throw std::invalid_argument("contract: closed index missing from plan");
    }
    std::map<int, Tensor> live = net.nodes;
    std::map<int, std::vector<int>> adj = net.hyperedges;
    // node id -> merged node id (union-find style forwarding)
    std::map<int, int> forward;
    auto resolve = [&](int id) {
        while (forward.count(id)) id = forward[id];
        return id;
    };
    int next_id = net.next_node_id;
    std::set<int> done;
    for (size_t pi = 0; pi < plan.order.size(); ++pi) {
        const int e = plan.order[pi];
        if (done.count(e)) continue;
        std::set<int> group;
        for (int n : adj[e]) group.insert(resolve(n));
        // Sum every pending edge already confined to this group in the same
        // pass; this turns runs of single-edge eliminations over one large
        // intermediate into a single sweep.
        std::vector<int> sums{e};
        for (size_t pj = pi + 1; pj < plan.order.size(); ++pj) {
            const int e2 = plan.order[pj];
            if (done.count(e2)) continue;
            bool inside = true;
            for (int n : adj[e2])
                if (!group.count(resolve(n))) {
                    inside = false;
                    break;
                }
            if (inside) sums.push_back(e2);
        }
        std::vector<const Tensor*> factors;
        for (int n : group) factors.push_back(&live.at(n));
        Tensor merged = multiply_sum(factors, sums, opts.max_entries);
        if (opts.check_replay_width && merged.rank() > plan.width)
            throw std::runtime_error("contract: replay width exceeded plan width (" +
                                     std::to_string(merged.rank()) + " > " +
                                     std::to_string(plan.width) + ")");
        const int id = next_id++;
        for (int n : group) {
            live.erase(n);
            forward[n] = id;
        }
        live.emplace(id, std::move(merged));
        for (int s : sums) {
            adj.erase(s);
            done.insert(s);
        }
    }
    // Combine whatever remains (open-index tensors and scalar components).
    std::vector<const Tensor*> rest;
    for (const auto& [id, t] : live) rest.push_back(&t);
    Tensor result = multiply_sum(rest, {}, opts.max_entries);
    return result.permuted(net.open_indices);
}

}  // namespace surfsim
