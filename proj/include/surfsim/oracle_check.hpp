#pragma once

// Randomized equivalence suite: small circuits drawn from the model's gate
// set with randomized noise strengths, simulated both by dense density-matrix
// evolution (branching over outcomes) and by tensor-network contraction with
// all wires open; the two must agree entry-for-entry.

#include <chrono>
#include <random>

#include "surfsim/dense_oracle.hpp"
#include "surfsim/experiment.hpp"

namespace surfsim {

struct OracleCheckResult {
    int circuits = 0;
    double max_deviation = 0;
    double seconds = 0;
    bool pass = false;
};

namespace detail {

inline CircuitSchedule random_circuit(std::mt19937_64& rng, const NoiseParameters& p,
                                      int num_qubits, int max_bits) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    CircuitSchedule c;
    c.num_qubits = num_qubits;
    double t = 0;
    int next_bit = 0;
    const int n_ops = 4 + static_cast<int>(uni(rng) * 7);
    for (int i = 0; i < n_ops; ++i) {
        const double r = uni(rng);
        const int q = static_cast<int>(uni(rng) * num_qubits);
        if (r < 0.35) {
            ScheduledOp op{uni(rng) < 0.5 ? OpKind::RY_PLUS : OpKind::RY_MINUS, {q}, t, p.T_g1Q};
            c.ops.push_back(op);
            t += p.T_g1Q;
        } else if (r < 0.65 && num_qubits >= 2) {
            int q2 = static_cast<int>(uni(rng) * (num_qubits - 1));
            if (q2 >= q) ++q2;
            ScheduledOp op{uni(rng) < 0.5 ? OpKind::CZ : OpKind::CPHASE, {q, q2}, t, p.T_g2Q};
            op.theta = (uni(rng) * 2 - 1) * 3.14159;
            c.ops.push_back(op);
            t += p.T_g2Q;
        } else if (r < 0.80 && next_bit < max_bits) {
            ScheduledOp op{OpKind::MEASURE, {q}, t, p.tau_m};
            op.bit = next_bit++;
            op.exposed = true;
            c.ops.push_back(op);
            t += p.tau_m;
        } else if (r < 0.90 && next_bit > 0) {
            ScheduledOp op{OpKind::CORRECT, {q}, t, 0};
            op.bit = static_cast<int>(uni(rng) * next_bit);
            op.pauli = "XYZ"[static_cast<int>(uni(rng) * 3)];
            c.ops.push_back(op);
        } else {
            ScheduledOp op{OpKind::PHOTON_DEPHASE, {q}, t, 0};
            op.t_m = 100 + uni(rng) * 300;
            c.ops.push_back(op);
        }
    }
    c.total_duration = t + 50;
    c.noisy_end = c.total_duration;
    c.sort_ops();
    return c;
}

inline NoiseParameters random_noise(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    NoiseParameters p = default_parameters();
    auto jitter = [&](double& v) { v *= 0.5 + 1.5 * uni(rng); };
    jitter(p.T1);
    jitter(p.T_phi);
    jitter(p.T_g1Q);
    jitter(p.T_g2Q);
    p.p_axis = uni(rng) * 5e-3;
    p.p_plane = uni(rng) * 5e-3;
    p.eps_RO = uni(rng) * 5e-3;
    p.alpha0 = uni(rng) * 0.2;
    return p;
}

}  // namespace detail

inline OracleCheckResult run_oracle_equivalence_suite(int count = 50, uint64_t seed = 12345,
                                                      double tol = 1e-10) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    OracleCheckResult res;
    res.circuits = count;
    for (int i = 0; i < count; ++i) {
        const int n = 2 + static_cast<int>(uni(rng) * 7);  // 2..8 qubits
        const int max_bits = std::max(1, 18 - 2 * n);      // keep the open rank workable
        const NoiseParameters p = detail::random_noise(rng);
        const CircuitSchedule c = detail::random_circuit(rng, p, n, max_bits);

        const OracleResult oracle = simulate_density(c, p, DensityMatrix::all_zero(n));

        BoundaryOptions b;
        b.final_kind = BoundaryOptions::Final::OPEN_WIRES;
        const BuiltNetwork built = network_from_circuit(c, p, b);
        const Hypergraph hg = line_graph(built.net);
        const TreeDecomposition td = tree_decompose(hg, built.net.open_indices, 0.5, seed + i, 1, 4);
        const ContractionPlan plan = plan_from_decomposition(td, built.net.open_indices);
        const Tensor t = contract(built.net, plan);

        const int nbits = static_cast<int>(built.open_bits.size());
        const int dim = 1 << n;
        for (const OracleBranch& br : oracle.branches) {
            size_t base = 0;
            for (int k = 0; k < nbits; ++k) {
                int value = 0;
                for (const auto& [bit, v] : br.bits)
                    if (bit == built.open_bits[k]) value = v;
                base |= static_cast<size_t>(value) << (nbits - 1 - k + 2 * n);
            }
            for (int r = 0; r < dim; ++r)
                for (int col = 0; col < dim; ++col) {
                    const auto tn = t.data[base + (static_cast<size_t>(r) << n) + col];
                    res.max_deviation =
                        std::max(res.max_deviation, std::abs(tn - br.state(r, col)));
                }
        }
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.pass = res.max_deviation < tol;
    return res;
}

}  // namespace surfsim
