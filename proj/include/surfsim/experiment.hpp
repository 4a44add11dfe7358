#pragma once

// Logical memory experiment driver: contract the open network, split the
// result into per-syndrome conditional channels, decode with the optimal
// Pauli correction, and aggregate into one logical PTM.

#include <chrono>
#include <cstring>
#include <thread>
#include <vector>

#include "surfsim/circuit_to_network.hpp"
#include "surfsim/plan_cache.hpp"
#include "surfsim/splitting.hpp"

namespace surfsim {

struct EngineOptions {
    int workers = 0;              // 0 = one per hardware thread
    int width_cap = 24;           // split until the replayed width fits
    int max_split_edges = 16;
    size_t max_entries = size_t(1) << 27;
    std::string plan_cache_dir;   // empty disables the disk cache
    uint64_t seed = 1;
    double plan_budget_seconds = 10.0;
    int min_restarts = 4;
    int max_restarts = 1 << 20;
    bool store_per_syndrome = false;
};

struct SyndromeRecord {
    double probability = 0;
    int correction = 0;  // 0..3 = I, X, Y, Z
    PauliTransferMatrix ptm;
};

struct LogicalChannelReport {
    PauliTransferMatrix aggregated_ptm;
    ErrorRateSummary rates;
    double total_probability = 0;
    int skipped_syndromes = 0;
    std::vector<SyndromeRecord> per_syndrome;  // filled when store_per_syndrome
    // Metadata.
    int rounds = 0;
    double kt_region = 0;
    uint64_t parameter_hash = 0;
    double runtime_seconds = 0;
    int plan_width = 0;
    int split_edge_count = 0;
    int open_bit_count = 0;
};

// argmax over {I, X, Y, Z} of the post-correction PTM diagonal sum
// (process fidelity with the identity up to scale); ties by listed order.
inline int optimal_pauli_correction(const ChoiMatrix& conditional) {
    int best = 0;
    double best_score = -1e300;
    for (int p = 0; p < 4; ++p) {
        const ChoiMatrix corrected =
            p == 0 ? conditional : compose(choi_from_unitary(pauli_1q(p)), conditional);
        const PauliTransferMatrix ptm = ptm_from_choi(corrected);
        const double score = ptm.matrix.trace();
        if (score > best_score + 1e-15) {
            best_score = score;
            best = p;
        }
    }
    return best;
}

inline uint64_t parameter_hash(const NoiseParameters& p, int rounds, const CrosstalkSpec& xtalk) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](double v) {
        uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        h = (h ^ bits) * 1099511628211ull;
    };
    for (double v : {p.T1, p.T_phi, p.T_g1Q, p.T_g2Q, p.tau_c, p.tau_d, p.tau_m, p.p_axis,
                     p.p_plane, p.eps_RO, p.kappa, p.chi, p.alpha0})
        mix(v);
    mix(static_cast<double>(rounds));
    mix(xtalk.kt_region);
    mix(xtalk.compensated ? 1.0 : 0.0);
    mix(xtalk.gated_only ? 1.0 : 0.0);
    if (xtalk.moved_pair) {
        mix(static_cast<double>(xtalk.moved_pair->first.x * 8 + xtalk.moved_pair->first.y));
        mix(static_cast<double>(xtalk.moved_pair->second.x * 8 + xtalk.moved_pair->second.y));
        mix(xtalk.moved_fraction);
    }
    return h;
}

struct ContractionOutcome {
    Tensor result;
    int plan_width = 0;
    int split_edge_count = 0;
};

// Plan (with optional disk cache), split to fit the width cap, contract.
// When the whole-network width exceeds the cap, indices from `splittable`
// (default: all open indices) are fixed and the subtask network — which is
// much sparser — is planned in its own right; every subtask reuses that
// one plan.
inline ContractionOutcome plan_and_contract(const TensorNetwork& net, const EngineOptions& eng,
                                            const std::vector<int>& splittable_in = {}) {
    const uint64_t key = structural_hash(net);
    std::optional<PlanCache> cache;
    std::optional<ExecutionRecipe> recipe;
    if (!eng.plan_cache_dir.empty()) {
        cache.emplace(eng.plan_cache_dir);
        recipe = cache->load(key);
    }
    if (!recipe) {
        const Hypergraph hg = line_graph(net);
        TreeDecomposition td = tree_decompose(hg, net.open_indices, eng.plan_budget_seconds,
                                              eng.seed, eng.min_restarts, eng.max_restarts);
        recipe.emplace();
        if (td.width <= eng.width_cap) {
            recipe->plan = plan_from_decomposition(td, net.open_indices);
            recipe->plan.estimated_cost = estimate_cost(hg, recipe->plan);
        } else {
            const std::vector<int>& splittable =
                splittable_in.empty() ? net.open_indices : splittable_in;
            recipe->split_edges =
                choose_split_edges(td, net.open_indices, eng.width_cap, eng.max_split_edges,
                                   splittable)
                    .split_edges;
            TensorNetwork fixed = net;
            for (int e : recipe->split_edges) fixed = fix_index(fixed, e, 0);
            const Hypergraph hg0 = line_graph(fixed);
            TreeDecomposition td0 =
                tree_decompose(hg0, fixed.open_indices, eng.plan_budget_seconds, eng.seed,
                               eng.min_restarts, eng.max_restarts);
            recipe->plan = plan_from_decomposition(td0, fixed.open_indices);
            recipe->plan.estimated_cost = estimate_cost(hg0, recipe->plan);
        }
        if (cache) cache->store(key, *recipe);
    }
    if ((size_t(1) << recipe->plan.width) > eng.max_entries)
        throw std::runtime_error(
            "plan_and_contract: no viable plan within the memory cap (best width " +
            std::to_string(recipe->plan.width) + " after fixing " +
            std::to_string(recipe->split_edges.size()) + " split edges; cap allows width " +
            std::to_string(63 - __builtin_clzll(eng.max_entries)) + ")");
    ContractOptions copts;
    copts.max_entries = eng.max_entries;
    SplitPlan split;
    split.split_edges = recipe->split_edges;
    ContractionOutcome out;
    const int workers = eng.workers > 0
                            ? eng.workers
                            : std::max(1u, std::thread::hardware_concurrency());
    out.result = split_and_contract(net, recipe->plan, split, workers, copts);
    out.plan_width = recipe->plan.width;
    out.split_edge_count = static_cast<int>(split.split_edges.size());
    return out;
}

// Contract an arbitrary schedule (test/oracle plumbing).
inline Tensor contract_circuit(const CircuitSchedule& circuit, const NoiseParameters& params,
                               const BoundaryOptions& boundary, const EngineOptions& eng = {}) {
    const BuiltNetwork built = network_from_circuit(circuit, params, boundary);
    return plan_and_contract(built.net, eng).result;
}

// Contract a memory-experiment circuit, decode every syndrome with the
// optimal logical correction, and aggregate. The circuit need not come from
// memory_experiment_circuit (tests inject hand-placed errors).
inline LogicalChannelReport decode_logical_channel(const MemoryExperimentCircuit& mec,
                                                   const NoiseParameters& params,
                                                   const EngineOptions& eng = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    BoundaryOptions boundary;
    boundary.initial = BoundaryOptions::Initial::MEMORY_BELL;
    boundary.final_kind = BoundaryOptions::Final::CODEWORD_ISOMETRY;
    const BuiltNetwork built = network_from_circuit(mec.circuit, params, boundary);
    // Syndrome-slice splitting: only the declared-bit indices are split
    // candidates; the logical/virtual legs stay whole.
    std::vector<int> bit_ids(built.net.open_indices.begin(),
                             built.net.open_indices.begin() + built.open_bits.size());
    ContractionOutcome co = plan_and_contract(built.net, eng, bit_ids);

    const int nbits = static_cast<int>(built.open_bits.size());
    const size_t n_syn = size_t(1) << nbits;
    if (co.result.data.size() != n_syn * 16)
        throw std::runtime_error("run_memory_experiment: unexpected result shape");

    LogicalChannelReport rep;
    rep.rounds = mec.rounds;
    rep.plan_width = co.plan_width;
    rep.split_edge_count = co.split_edge_count;
    rep.open_bit_count = nbits;
    if (eng.store_per_syndrome) rep.per_syndrome.resize(n_syn);

    ChoiMatrix aggregated = ChoiMatrix::zero(1);
    for (size_t s = 0; s < n_syn; ++s) {
        // Result layout: [syndrome bits..., l_ket, v_ket, l_bra, v_bra],
        // first index most significant. Conditional state rho_s maps to a
        // Choi matrix with the virtual qubit as input: C = 2 * rho_s.
        ChoiMatrix cond = ChoiMatrix::zero(1);
        for (int k = 0; k < 2; ++k)
            for (int a = 0; a < 2; ++a)
                for (int l = 0; l < 2; ++l)
                    for (int b = 0; b < 2; ++b)
                        cond.matrix(a * 2 + k, b * 2 + l) =
                            2.0 * co.result.data[s * 16 + (size_t(k) * 8 + a * 4 + l * 2 + b)];
        const double p_s = 0.5 * cond.matrix.trace().real();
        if (p_s < 1e-300) {
            ++rep.skipped_syndromes;
            continue;
        }
        rep.total_probability += p_s;
        const int corr = optimal_pauli_correction(cond);
        const ChoiMatrix corrected =
            corr == 0 ? cond : compose(choi_from_unitary(pauli_1q(corr)), cond);
        aggregated.matrix += corrected.matrix;
        if (eng.store_per_syndrome) {
            SyndromeRecord& r = rep.per_syndrome[s];
            r.probability = p_s;
            r.correction = corr;
            ChoiMatrix norm = corrected;
            norm.matrix /= p_s;
            r.ptm = ptm_from_choi(norm);
        }
    }
    rep.aggregated_ptm = ptm_from_choi(aggregated);
    rep.rates = error_rates_from_ptm(rep.aggregated_ptm);
    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline LogicalChannelReport run_memory_experiment(int rounds, const NoiseParameters& params,
                                                  const CrosstalkSpec& xtalk,
                                                  const EngineOptions& eng = {},
                                                  const MemoryExperimentOptions& mopts = {}) {
    const MemoryExperimentCircuit mec = memory_experiment_circuit(rounds, params, xtalk, mopts);
    LogicalChannelReport rep = decode_logical_channel(mec, params, eng);
    rep.kt_region = xtalk.kt_region;
    rep.parameter_hash = parameter_hash(params, rounds, xtalk);
    return rep;
}

struct ChannelComparison {
    Eigen::Matrix4d difference;
    double one_norm = 0;
    double max_norm = 0;
};

inline ChannelComparison compare_channels(const LogicalChannelReport& a,
                                          const LogicalChannelReport& b) {
    ChannelComparison c;
    c.difference = a.aggregated_ptm.matrix - b.aggregated_ptm.matrix;
    c.one_norm = c.difference.cwiseAbs().sum();
    c.max_norm = c.difference.cwiseAbs().maxCoeff();
    return c;
}

// Entry-wise 1-norm of the logical-PTM change when one crosstalk CPHASE is
// relocated from the end to the start of its CZ-regions.
inline double moving_inaccuracy(const NoiseParameters& params,
                                const std::pair<QubitId, QubitId>& pair, int rounds = 1,
                                const EngineOptions& eng = {}, double kt_region = 0.03) {
    CrosstalkSpec base;
    base.kt_region = kt_region;
    LogicalChannelReport a = run_memory_experiment(rounds, params, base, eng);
    CrosstalkSpec moved = base;
    moved.moved_pair = pair;
    moved.moved_fraction = 0.0;
    LogicalChannelReport b = run_memory_experiment(rounds, params, moved, eng);
    return compare_channels(a, b).one_norm;
}

struct SweepPoint {
    double kt_region = 0;
    double p_bit = 0;
    double p_phase = 0;
    double p_y = 0;
    Eigen::Vector3d rotations = Eigen::Vector3d::Zero();
    PauliTransferMatrix ptm;
};

inline std::vector<SweepPoint> sensitivity_sweep(const std::vector<double>& k_values, int rounds,
                                                 const NoiseParameters& params,
                                                 const EngineOptions& eng = {},
                                                 const CrosstalkSpec& base = {}) {
    std::vector<SweepPoint> series;
    for (double kt : k_values) {
        CrosstalkSpec spec = base;
        spec.kt_region = kt;
        LogicalChannelReport rep = run_memory_experiment(rounds, params, spec, eng);
        SweepPoint pt;
        pt.kt_region = kt;
        pt.p_bit = rep.rates.p_bit;
        pt.p_phase = rep.rates.p_phase;
        pt.p_y = rep.rates.p_y;
        pt.rotations = rep.rates.rotations;
        pt.ptm = rep.aggregated_ptm;
        series.push_back(std::move(pt));
    }
    return series;
}

}  // namespace surfsim
