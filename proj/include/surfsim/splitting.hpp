#pragma once

// Index splitting: partition one contraction into 2^s independent
// subtasks by fixing selected indices, run them on a worker pool, and
// combine deterministically (sum for closed indices, stacking for open).

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>
#include <vector>

#include "surfsim/network.hpp"
#include "surfsim/treedecomp.hpp"

namespace surfsim {

struct SplitPlan {
    std::vector<int> split_edges;
    int subtask_count() const { return 1 << split_edges.size(); }
};

// Greedy split selection: repeatedly drop the index whose removal lowers
// the replayed width the most, until the width cap or the subtask cap is
// reached. Candidates default to the open indices (slicing the output),
// falling back to closed indices when that is not enough.
inline SplitPlan choose_split_edges(const TreeDecomposition& td, const std::vector<int>& open,
                                    int width_cap, int max_split_edges,
                                    const std::vector<int>& candidates = {}) {
    SplitPlan sp;
    std::set<int> allowed(candidates.begin(), candidates.end());
    std::vector<std::set<int>> bags = td.bags;
    auto width = [&]() {
        int w = 0;
        for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()));
        return w;
    };
    std::set<int> chosen;
    while (width() > width_cap && static_cast<int>(sp.split_edges.size()) < max_split_edges) {
        // Count appearances in maximal bags; prefer open indices.
        const int w = width();
        int best = -1, best_score = -1;
        bool best_open = false;
        for (const auto& b : bags) {
            if (static_cast<int>(b.size()) != w) continue;
            for (int v : b) {
                if (chosen.count(v)) continue;
                if (!allowed.empty() && !allowed.count(v)) continue;
                int score = 0;
                for (const auto& bb : bags)
                    if (static_cast<int>(bb.size()) == w && bb.count(v)) ++score;
                const bool is_open = std::find(open.begin(), open.end(), v) != open.end();
                if (score > best_score || (score == best_score && is_open && !best_open) ||
                    (score == best_score && is_open == best_open && v < best)) {
                    best = v;
                    best_score = score;
                    best_open = is_open;
                }
            }
        }
        if (best < 0) break;
        chosen.insert(best);
        sp.split_edges.push_back(best);
        for (auto& b : bags) b.erase(best);
    }
    return sp;
}

// Contract all fixed subnetworks and combine. Deterministic: subtask
// results are stored by assignment and reduced in assignment order.
inline Tensor split_and_contract(const TensorNetwork& net, const ContractionPlan& plan,
                                 const SplitPlan& split, int workers,
                                 const ContractOptions& opts = {}) {
    const int s = static_cast<int>(split.split_edges.size());
    if (s == 0) return contract(net, plan, opts);
    {
        std::set<int> uniq(split.split_edges.begin(), split.split_edges.end());
        if (static_cast<int>(uniq.size()) != s)
            throw std::invalid_argument("split_and_contract: duplicate split edges");
        for (int e : split.split_edges)
            if (!net.hyperedges.count(e))
                throw std::invalid_argument("split_and_contract: unknown split edge");
    }
    std::set<int> open_set(net.open_indices.begin(), net.open_indices.end());
    ContractionPlan sub_plan = plan;
    sub_plan.order.erase(std::remove_if(sub_plan.order.begin(), sub_plan.order.end(),
                                        [&](int e) {
                                            return std::find(split.split_edges.begin(),
                                                             split.split_edges.end(),
                                                             e) != split.split_edges.end();
                                        }),
                         sub_plan.order.end());

    const int n_tasks = 1 << s;
    std::vector<Tensor> results(n_tasks);
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto work = [&]() {
        try {
            for (;;) {
                const int a = next.fetch_add(1);
                if (a >= n_tasks) return;
                TensorNetwork sub = net;
                for (int k = 0; k < s; ++k)
                    sub = fix_index(sub, split.split_edges[k], (a >> (s - 1 - k)) & 1);
                results[a] = contract(sub, sub_plan, opts);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lk(error_mu);
            if (!error) error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = std::max(1, std::min(workers, n_tasks));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);

    // Assemble: open split edges stack into their slot of the full output,
    // closed split edges sum.
    Tensor out;
    out.indices = net.open_indices;
    out.data.assign(size_t(1) << out.indices.size(), complex_t(0, 0));
    const int r = out.rank();
    for (int a = 0; a < n_tasks; ++a) {
        // Base offset and position of each surviving open index.
        size_t base = 0;
        std::vector<int> sub_pos;  // positions in `out` of the subtask's indices
        for (int t = 0; t < r; ++t) {
            const int id = out.indices[t];
            const int k = [&]() {
                for (int kk = 0; kk < s; ++kk)
                    if (split.split_edges[kk] == id) return kk;
                return -1;
            }();
            if (k >= 0)
                base |= size_t((a >> (s - 1 - k)) & 1) << (r - 1 - t);
            else
                sub_pos.push_back(t);
        }
        const Tensor sub = results[a].rank() ? results[a].permuted([&]() {
            std::vector<int> want;
            for (int t : sub_pos) want.push_back(out.indices[t]);
            return want;
        }()) : results[a];
        for (size_t i = 0; i < sub.data.size(); ++i) {
            size_t dst = base;
            for (size_t t = 0; t < sub_pos.size(); ++t) {
                const size_t bit = (i >> (sub_pos.size() - 1 - t)) & 1;
                dst |= bit << (r - 1 - sub_pos[t]);
            }
            out.data[dst] += sub.data[i];
        }
    }
    return out;
}

}  // namespace surfsim
