#pragma once

// Brute-force density-matrix simulator for small subsystems. Ground truth
// for the tensor-network engine: applies every lowered event in time order
// with plain matrix arithmetic and enumerates measurement branches.

#include <stdexcept>
#include <vector>

#include "surfsim/lowering.hpp"

namespace surfsim {

inline constexpr int kOracleMaxQubits = 10;

struct DensityMatrix {
    int num_qubits = 0;
    ComplexMatrix matrix;

    static DensityMatrix all_zero(int n) {
        DensityMatrix d;
        d.num_qubits = n;
        d.matrix = ComplexMatrix::Zero(1 << n, 1 << n);
        d.matrix(0, 0) = 1;
        return d;
    }
    static DensityMatrix pure(int n, const Eigen::VectorXcd& psi) {
        DensityMatrix d;
        d.num_qubits = n;
        d.matrix = psi * psi.adjoint();
        return d;
    }
};

namespace oracle_detail {

// Apply a k-qubit Choi map to the given qubits (qubit 0 = most significant
// bit) of an n-qubit density matrix.
inline void apply_on_subsystem(ComplexMatrix& rho, int n, const ChoiMatrix& choi,
                               const std::vector<int>& qubits) {
    const int k = choi.num_qubits;
    if (static_cast<int>(qubits.size()) != k)
        throw std::invalid_argument("apply_on_subsystem: qubit count mismatch");
    const int dk = 1 << k;
    std::vector<int> shift(k);
    for (int i = 0; i < k; ++i) shift[i] = n - 1 - qubits[i];
    // Enumerate assignments of the remaining bits.
    std::vector<int> rest;
    for (int q = 0; q < n; ++q)
        if (std::find(qubits.begin(), qubits.end(), q) == qubits.end())
            rest.push_back(n - 1 - q);
    const int nrest = static_cast<int>(rest.size());
    auto compose_row = [&](int sub, int rbits) {
        int row = 0;
        for (int i = 0; i < k; ++i) row |= ((sub >> (k - 1 - i)) & 1) << shift[i];
        for (int i = 0; i < nrest; ++i) row |= ((rbits >> i) & 1) << rest[i];
        return row;
    };
    ComplexMatrix block(dk, dk), out(dk, dk);
    for (int rr = 0; rr < (1 << nrest); ++rr) {
        for (int rc = 0; rc < (1 << nrest); ++rc) {
            for (int a = 0; a < dk; ++a)
                for (int b = 0; b < dk; ++b) block(a, b) = rho(compose_row(a, rr), compose_row(b, rc));
            out = apply_channel(choi, block);
            for (int a = 0; a < dk; ++a)
                for (int b = 0; b < dk; ++b) rho(compose_row(a, rr), compose_row(b, rc)) = out(a, b);
        }
    }
}

inline void apply_diagonal(ComplexMatrix& rho, int n,
                           const std::vector<std::complex<double>>& diag,
                           const std::vector<int>& qubits) {
    const int dim = 1 << n;
    const int k = static_cast<int>(qubits.size());
    auto sub_of = [&](int full) {
        int s = 0;
        for (int i = 0; i < k; ++i) s |= ((full >> (n - 1 - qubits[i])) & 1) << (k - 1 - i);
        return s;
    };
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) rho(r, c) *= diag[sub_of(r)] * std::conj(diag[sub_of(c)]);
}

}  // namespace oracle_detail

struct OracleBranch {
    std::vector<std::pair<int, int>> bits;  // (bit id, declared value), in measurement order
    ComplexMatrix state;                    // unnormalized: trace = branch probability
    double probability() const { return state.trace().real(); }
};

struct OracleResult {
    int num_qubits = 0;
    std::vector<OracleBranch> branches;
};

inline OracleResult simulate_density_events(const std::vector<Event>& events, int num_qubits,
                                            const DensityMatrix& initial) {
    if (num_qubits > kOracleMaxQubits)
        throw std::invalid_argument("dense oracle capped at 10 qubits");
    if (initial.num_qubits != num_qubits)
        throw std::invalid_argument("initial state size mismatch");
    OracleResult res;
    res.num_qubits = num_qubits;
    res.branches.push_back(OracleBranch{{}, initial.matrix});
    for (const auto& ev : events) {
        switch (ev.kind) {
            case EventKind::CHANNEL:
                for (auto& br : res.branches)
                    oracle_detail::apply_on_subsystem(br.state, num_qubits, ev.choi, ev.qubits);
                break;
            case EventKind::DIAGONAL:
                for (auto& br : res.branches)
                    oracle_detail::apply_diagonal(br.state, num_qubits, ev.diagonal, ev.qubits);
                break;
            case EventKind::MEASURE: {
                std::vector<OracleBranch> next;
                next.reserve(res.branches.size() * 2);
                for (auto& br : res.branches) {
                    for (int d = 0; d < 2; ++d) {
                        OracleBranch nb = br;
                        oracle_detail::apply_on_subsystem(nb.state, num_qubits,
                                                          ev.instrument.outcome_maps[d], ev.qubits);
                        nb.bits.emplace_back(ev.bit, d);
                        next.push_back(std::move(nb));
                    }
                }
                res.branches = std::move(next);
                break;
            }
            case EventKind::CONTROLLED_PAULI: {
                for (auto& br : res.branches) {
                    int val = -1;
                    for (const auto& [bit, v] : br.bits)
                        if (bit == ev.control_bit) val = v;
                    if (val < 0) throw std::invalid_argument("controlled op on unmeasured bit");
                    if (val == 1) {
                        const int axis = ev.pauli == 'X' ? 1 : (ev.pauli == 'Y' ? 2 : 3);
                        ChoiMatrix u = choi_from_unitary(pauli_1q(axis));
                        oracle_detail::apply_on_subsystem(br.state, num_qubits, u, ev.qubits);
                    }
                }
                break;
            }
        }
    }
    return res;
}

inline OracleResult simulate_density(const CircuitSchedule& circuit, const NoiseParameters& params,
                                     const DensityMatrix& initial) {
    return simulate_density_events(lower_schedule(circuit, params), circuit.num_qubits, initial);
}

// Trace out all qubits except `keep` (listed most-significant first in the
// output ordering).
inline ComplexMatrix partial_trace_keep(const ComplexMatrix& rho, int n,
                                        const std::vector<int>& keep) {
    const int k = static_cast<int>(keep.size());
    const int dk = 1 << k;
    std::vector<int> rest;
    for (int q = 0; q < n; ++q)
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) rest.push_back(n - 1 - q);
    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    auto full_of = [&](int sub, int rbits) {
        int row = 0;
        for (int i = 0; i < k; ++i) row |= ((sub >> (k - 1 - i)) & 1) << (n - 1 - keep[i]);
        for (size_t i = 0; i < rest.size(); ++i) row |= ((rbits >> i) & 1) << rest[i];
        return row;
    };
    for (int a = 0; a < dk; ++a)
        for (int b = 0; b < dk; ++b)
            for (int r = 0; r < (1 << rest.size()); ++r) out(a, b) += rho(full_of(a, r), full_of(b, r));
    return out;
}

// Reconstruct the circuit's channel on `subsystem` by entangling it with
// fresh reference qubits, running the circuit, and reading the Choi matrix
// off the joint state. Branches are summed (total channel).
inline ChoiMatrix channel_tomography(const CircuitSchedule& circuit, const NoiseParameters& params,
                                     const std::vector<int>& subsystem) {
    const int k = static_cast<int>(subsystem.size());
    const int n = circuit.num_qubits + k;  // references appended at the end
    if (n > kOracleMaxQubits) throw std::invalid_argument("tomography size limit");
    const int dk = 1 << k;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(1 << n);
    for (int a = 0; a < dk; ++a) {
        int idx = 0;
        for (int i = 0; i < k; ++i) {
            const int bit = (a >> (k - 1 - i)) & 1;
            idx |= bit << (n - 1 - subsystem[i]);          // subsystem qubit
            idx |= bit << (n - 1 - (circuit.num_qubits + i));  // its reference
        }
        psi(idx) = 1.0 / std::sqrt(static_cast<double>(dk));
    }
    CircuitSchedule padded = circuit;
    padded.num_qubits = n;
    for (int i = 0; i < k; ++i) padded.undamped_qubits.push_back(circuit.num_qubits + i);
    OracleResult res = simulate_density(padded, params, DensityMatrix::pure(n, psi));
    ComplexMatrix joint = ComplexMatrix::Zero(dk * dk, dk * dk);
    std::vector<int> keep = subsystem;
    for (int i = 0; i < k; ++i) keep.push_back(circuit.num_qubits + i);
    for (const auto& br : res.branches) joint += partial_trace_keep(br.state, n, keep);
    // joint rows index (subsystem bits, reference bits) = (output k, input a).
    ChoiMatrix c = ChoiMatrix::zero(k);
    for (int a = 0; a < dk; ++a)
        for (int kk = 0; kk < dk; ++kk)
            for (int b = 0; b < dk; ++b)
                for (int l = 0; l < dk; ++l)
                    c.matrix(a * dk + kk, b * dk + l) = static_cast<double>(dk) *
                        joint(kk * dk + a, l * dk + b);
    return c;
}

}  // namespace surfsim
