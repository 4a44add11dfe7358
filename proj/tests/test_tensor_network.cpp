#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "surfsim/plan_cache.hpp"
#include "surfsim/splitting.hpp"
#include "surfsim/treedecomp.hpp"

using namespace surfsim;

namespace {

// Random network: a chain of random rank<=3 tensors with shared indices,
// two open endpoints. Dense enough to exercise hyperedges (indices shared
// by >2 tensors).
TensorNetwork random_network(std::mt19937_64& rng, int n_tensors = 10) {
    TensorNetwork net;
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<int> pool;
    auto rand_tensor = [&](std::vector<int> idx) {
        Tensor t;
        t.indices = std::move(idx);
        t.data.resize(size_t(1) << t.indices.size());
        for (auto& v : t.data) v = complex_t(u(rng), u(rng));
        net.add_tensor(std::move(t));
    };
    int prev = net.new_index();
    pool.push_back(prev);
    for (int i = 0; i < n_tensors; ++i) {
        const int next = net.new_index();
        std::vector<int> idx{prev, next};
        // Occasionally re-touch an old index, making it a hyperedge.
        if (i % 3 == 2) idx.push_back(pool[rng() % pool.size()]);
        rand_tensor(idx);
        pool.push_back(next);
        prev = next;
    }
    net.open_indices = {0, prev};
    return net;
}

// Reference contraction: multiply everything in one shot.
Tensor brute_force(const TensorNetwork& net) {
    std::vector<const Tensor*> all;
    for (const auto& [id, t] : net.nodes) all.push_back(&t);
    return multiply_sum(all, net.closed_indices()).permuted(net.open_indices);
}

double max_dev(const Tensor& a, const Tensor& b) {
    REQUIRE(a.indices == b.indices);
    double m = 0;
    for (size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

ContractionPlan plan_for(const TensorNetwork& net, uint64_t seed, int restarts = 4) {
    const Hypergraph hg = line_graph(net);
    const TreeDecomposition td = tree_decompose(hg, net.open_indices, 0.5, seed, restarts, restarts);
    return plan_from_decomposition(td, net.open_indices);
}

}  // namespace

TEST_CASE("multiply_sum aligns shared indices and sums requested ones") {
    // A[i,j] * B[j,k], sum j  ==  matrix product.
    Tensor a{{0, 1}, {1, 2, 3, 4}};
    Tensor b{{1, 2}, {5, 6, 7, 8}};
    const Tensor ab = multiply_sum({&a, &b}, {1});
    CHECK(ab.indices == std::vector<int>{0, 2});
    CHECK(ab.data[0] == complex_t(1 * 5 + 2 * 7, 0));
    CHECK(ab.data[1] == complex_t(1 * 6 + 2 * 8, 0));
    CHECK(ab.data[2] == complex_t(3 * 5 + 4 * 7, 0));
    CHECK(ab.data[3] == complex_t(3 * 6 + 4 * 8, 0));
    // Not summing j keeps it as a diagonal (hyperedge) index.
    const Tensor diag = multiply_sum({&a, &b}, {});
    CHECK(diag.indices == std::vector<int>{0, 1, 2});
    CHECK(diag.data[0b000] == complex_t(1 * 5, 0));
    CHECK(diag.data[0b010] == complex_t(2 * 7, 0));
    // Three factors on one shared index align element-wise.
    Tensor c{{1}, {10, 100}};
    const Tensor abc = multiply_sum({&a, &b, &c}, {1});
    CHECK(abc.data[0] == complex_t(1 * 5 * 10 + 2 * 7 * 100, 0));
}

TEST_CASE("contraction result is independent of the plan over many seeds") {
    std::mt19937_64 rng(7);
    const TensorNetwork net = random_network(rng, 12);
    const Tensor ref = brute_force(net);
    for (uint64_t seed = 1; seed <= 22; ++seed) {
        ContractionPlan plan = plan_for(net, seed);
        // Shuffle within the plan too: any elimination order that respects
        // the decomposition gives the same result; here we use the plan as
        // produced but with a different seed each time.
        const Tensor got = contract(net, plan);
        CHECK(max_dev(got, ref) < 1e-12);
    }
}

TEST_CASE("split contraction with 1..5 edges equals the unsplit result") {
    std::mt19937_64 rng(42);
    const TensorNetwork net = random_network(rng, 14);
    const ContractionPlan plan = plan_for(net, 3);
    const Tensor ref = contract(net, plan);
    const std::vector<int> closed = net.closed_indices();
    for (int s = 1; s <= 5; ++s) {
        SplitPlan sp;
        sp.split_edges.assign(closed.begin(), closed.begin() + s);
        // Fixed indices leave the plan; replay width can only shrink.
        const Tensor got = split_and_contract(net, plan, sp, 3);
        CHECK(max_dev(got, ref) < 1e-12);
    }
    // Splitting an open index also reproduces the unsplit stacking.
    SplitPlan so;
    so.split_edges = {net.open_indices[0], closed[0]};
    CHECK(max_dev(split_and_contract(net, plan, so, 2), ref) < 1e-12);
}

TEST_CASE("replay width is checked against the plan's declared width") {
    std::mt19937_64 rng(5);
    const TensorNetwork net = random_network(rng, 10);
    ContractionPlan plan = plan_for(net, 1);
    ContractOptions opts;
    opts.check_replay_width = true;
    CHECK_NOTHROW(contract(net, plan, opts));
    plan.width = 1;  // lie about the width: the replay must detect it
    CHECK_THROWS_AS(contract(net, plan, opts), std::runtime_error);
}

TEST_CASE("tree decomposition of a path has width 2 and K5 needs 5") {
    // Path: tensors over consecutive index pairs; moralized graph is a path.
    TensorNetwork path;
    for (int i = 0; i < 8; ++i) path.new_index();
    for (int i = 0; i + 1 < 8; ++i) path.add_tensor(Tensor{{i, i + 1}, {1, 0, 0, 1}});
    const Hypergraph hg = line_graph(path);
    const TreeDecomposition td = tree_decompose(hg, {}, 0.1, 1);
    CHECK(td.width == 2);  // bags of (vertex + neighbor)
    CHECK(validate_decomposition(hg, {}, td).valid);

    // K5 as one rank-5 tensor: one bag holds all 5 indices.
    TensorNetwork k5;
    for (int i = 0; i < 5; ++i) k5.new_index();
    k5.add_tensor(Tensor{{0, 1, 2, 3, 4}, std::vector<complex_t>(32, 1.0)});
    const Hypergraph hk = line_graph(k5);
    const TreeDecomposition tk = tree_decompose(hk, {}, 0.1, 1);
    CHECK(tk.width == 5);
    CHECK(validate_decomposition(hk, {}, tk).valid);
}

TEST_CASE("the validator rejects tampered decompositions") {
    std::mt19937_64 rng(9);
    const TensorNetwork net = random_network(rng, 8);
    const Hypergraph hg = line_graph(net);
    TreeDecomposition td = tree_decompose(hg, net.open_indices, 0.1, 1);
    REQUIRE(validate_decomposition(hg, net.open_indices, td).valid);

    TreeDecomposition missing = td;
    for (auto& b : missing.bags) b.erase(net.closed_indices().front());
    CHECK(!validate_decomposition(hg, net.open_indices, missing).valid);

    // Break the connectivity of one index's occurrence set.
    TreeDecomposition split_occurrence = td;
    const int victim = net.closed_indices().front();
    // Put the victim into a far-away leaf bag without its parent chain.
    int leaf = -1;
    for (size_t i = 0; i < split_occurrence.bags.size(); ++i)
        if (!split_occurrence.bags[i].count(victim) &&
            split_occurrence.parent[i] >= 0 &&
            !split_occurrence.bags[split_occurrence.parent[i]].count(victim))
            leaf = static_cast<int>(i);
    REQUIRE(leaf >= 0);
    split_occurrence.bags[leaf].insert(victim);
    CHECK(!validate_decomposition(hg, net.open_indices, split_occurrence).valid);
}

TEST_CASE("planning is deterministic with a pinned restart count") {
    std::mt19937_64 rng(11);
    const TensorNetwork net = random_network(rng, 12);
    const ContractionPlan a = plan_for(net, 123, 6);
    const ContractionPlan b = plan_for(net, 123, 6);
    CHECK(a.order == b.order);
    CHECK(a.width == b.width);
}

TEST_CASE("plan cache stores and reloads recipes by structural hash") {
    std::mt19937_64 rng(13);
    const TensorNetwork net = random_network(rng, 10);
    const uint64_t key = structural_hash(net);
    const std::string dir = (std::filesystem::temp_directory_path() / "surfsim-plan-test").string();
    std::filesystem::remove_all(dir);
    PlanCache cache(dir);
    CHECK(!cache.load(key).has_value());
    ExecutionRecipe recipe;
    recipe.plan = plan_for(net, 2);
    recipe.plan.estimated_cost = 123.5;
    recipe.split_edges = {4, 7};
    cache.store(key, recipe);
    const auto back = cache.load(key);
    REQUIRE(back.has_value());
    CHECK(back->plan.order == recipe.plan.order);
    CHECK(back->plan.width == recipe.plan.width);
    CHECK(back->plan.estimated_cost == recipe.plan.estimated_cost);
    CHECK(back->split_edges == recipe.split_edges);
    // Different structure, different key.
    std::mt19937_64 rng2(14);
    CHECK(structural_hash(random_network(rng2, 11)) != key);
    std::filesystem::remove_all(dir);
}

TEST_CASE("fix_index slices every adjacent tensor consistently") {
    Tensor a{{0, 1}, {1, 2, 3, 4}};
    Tensor b{{1, 2}, {5, 6, 7, 8}};
    TensorNetwork net;
    net.next_index_id = 3;
    net.add_tensor(a);
    net.add_tensor(b);
    net.open_indices = {0, 2};
    const ContractionPlan plan = plan_for(net, 1);
    const Tensor full = contract(net, plan);
    // Sum of the two slices over the fixed closed index equals the full result.
    ContractionPlan empty_plan;
    empty_plan.width = plan.width;
    Tensor sum = contract(fix_index(net, 1, 0), empty_plan);
    const Tensor one = contract(fix_index(net, 1, 1), empty_plan);
    for (size_t i = 0; i < sum.data.size(); ++i) sum.data[i] += one.data[i];
    CHECK(max_dev(sum, full) < 1e-14);
}
