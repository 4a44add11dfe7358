#pragma once

// Translate an event stream into an open tensor network. Each qubit carries
// a ket wire and a bra wire; channels advance both wires with their Choi
// data, diagonal gates and projectors attach in place (no new wires), and
// measurement outcomes become indices that stay open when decoder-visible.

#include <map>
#include <stdexcept>
#include <vector>

#include "surfsim/layout.hpp"
#include "surfsim/lowering.hpp"
#include "surfsim/network.hpp"

namespace surfsim {

struct BoundaryOptions {
    enum class Initial { ALL_ZERO, MEMORY_BELL } initial = Initial::ALL_ZERO;
    enum class Final { TRACE, OPEN_WIRES, CODEWORD_ISOMETRY } final_kind = Final::TRACE;
};

struct BuiltNetwork {
    TensorNetwork net;
    std::vector<int> open_bits;  // bit ids in the order their indices appear in open_indices
    // Set for CODEWORD_ISOMETRY / OPEN_WIRES finals; appended after the bit
    // indices in open_indices. Isometry order: l_ket, v_ket, l_bra, v_bra.
    std::vector<int> final_indices;
};

namespace detail {

// Choi matrix as a tensor with indices [kout..., bout..., kin..., bin...],
// one bit per qubit, qubit 0 most significant.
inline Tensor choi_tensor(const ChoiMatrix& c, const std::vector<int>& kout,
                          const std::vector<int>& bout, const std::vector<int>& kin,
                          const std::vector<int>& bin) {
    const int n = c.num_qubits;
    const int d = 1 << n;
    Tensor t;
    t.indices.reserve(static_cast<size_t>(4) * n);
    for (int i : kout) t.indices.push_back(i);
    for (int i : bout) t.indices.push_back(i);
    for (int i : kin) t.indices.push_back(i);
    for (int i : bin) t.indices.push_back(i);
    t.data.resize(static_cast<size_t>(d) * d * d * d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    t.data[(((static_cast<size_t>(k) * d + l) * d + a) * d) + b] =
                        c.matrix(a * d + k, b * d + l);
    return t;
}

// Unitary channels have rank-1 Choi matrices C[(a,k),(b,l)] = U[k,a]
// conj(U[l,b]); returns U (scaled) when the channel factors, so the ket and
// bra sides can be separate low-rank tensors.
inline std::optional<ComplexMatrix> unitary_factor(const ChoiMatrix& c, double tol = 1e-12) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(c.matrix);
    const auto& ev = es.eigenvalues();
    const int top = static_cast<int>(ev.size()) - 1;
    for (int i = 0; i < top; ++i)
        if (std::abs(ev(i)) > tol) return std::nullopt;
    if (ev(top) <= tol) return std::nullopt;
    const int d = 1 << c.num_qubits;
    Eigen::VectorXcd v = es.eigenvectors().col(top) * std::sqrt(ev(top));
    ComplexMatrix u(d, d);
    for (int a = 0; a < d; ++a)
        for (int k = 0; k < d; ++k) u(k, a) = v(a * d + k);
    return u;
}

inline bool is_identity_channel(const ChoiMatrix& c, double tol = 1e-15) {
    return (c.matrix - identity_channel(c.num_qubits).matrix).cwiseAbs().maxCoeff() < tol;
}

// Logical codewords are uniform superpositions over the X-stabilizer orbit:
// data bit q = XOR of the orbit variables of the X-stabilizers containing q,
// plus the logical bit when q supports logical X. Emitting one XOR tensor
// per data qubit (instead of one rank-10 amplitude tensor) keeps the
// boundary cliques small. `scale` is folded into the first tensor.
inline void add_codeword_parity_tensors(TensorNetwork& net, const Surface17& s,
                                        const std::vector<int>& data_wires, int logical_index,
                                        std::complex<double> scale) {
    std::vector<int> loop(4);
    for (int i = 0; i < 4; ++i) loop[i] = net.new_index();
    for (int q = 0; q < 9; ++q) {
        const QubitId& dq = s.data[q];
        Tensor t;
        t.indices.push_back(data_wires[q]);
        for (int i = 0; i < 4; ++i) {
            const auto& sup = s.stabilizers[i].support;  // X-stabilizers listed first
            if (std::find(sup.begin(), sup.end(), dq) != sup.end()) t.indices.push_back(loop[i]);
        }
        if (std::find(s.logical_x.begin(), s.logical_x.end(), dq) != s.logical_x.end())
            t.indices.push_back(logical_index);
        const int r = t.rank();
        t.data.assign(size_t(1) << r, 0.0);
        const std::complex<double> w = q == 0 ? scale : 1.0;
        for (size_t a = 0; a < t.data.size(); ++a) {
            int parity = 0;
            for (int bitpos = 0; bitpos < r; ++bitpos) parity ^= static_cast<int>(a >> bitpos) & 1;
            if (parity == 0) t.data[a] = w;  // data bit equals the XOR of the rest
        }
        net.add_tensor(std::move(t));
    }
}

}  // namespace detail

inline BuiltNetwork build_network(const std::vector<Event>& events, int num_qubits,
                                  const BoundaryOptions& opts) {
    BuiltNetwork out;
    TensorNetwork& net = out.net;
    std::vector<int> ket(num_qubits, -1), bra(num_qubits, -1);
    // A qubit whose density matrix is forced diagonal (just prepared in |0>
    // or just measured, with only population-preserving evolution since) is
    // tracked by one classical wire instead of a ket/bra pair. That halves
    // the wire count of idle ancillas, which is what keeps contraction
    // treewidth down when crossing phases tie them to busy neighbours.
    std::vector<int> cls(num_qubits, -1);
    std::vector<bool> classical(num_qubits, false), known_zero(num_qubits, false);

    auto prepare_zero = [&](int q) {
        classical[q] = true;
        known_zero[q] = true;
        cls[q] = net.new_index();
        net.add_tensor(Tensor{{cls[q]}, {1.0, 0.0}});
    };
    auto make_quantum = [&](int q) {
        classical[q] = false;
        known_zero[q] = false;
        ket[q] = net.new_index();
        bra[q] = net.new_index();
    };
    // Re-expand a classical wire into ket/bra wires (delta tensor).
    auto promote = [&](int q) {
        if (!classical[q]) return;
        const int cw = cls[q];
        make_quantum(q);
        Tensor t{{cw, ket[q], bra[q]}, std::vector<std::complex<double>>(8, 0.0)};
        t.data[0b000] = 1.0;
        t.data[0b111] = 1.0;
        net.add_tensor(std::move(t));
    };

    // Initial boundary.
    if (opts.initial == BoundaryOptions::Initial::ALL_ZERO) {
        for (int q = 0; q < num_qubits; ++q) prepare_zero(q);
    } else {
        // (|0_L 0_v> + |1_L 1_v>)/sqrt(2) over the 9 data qubits plus the
        // virtual reference qubit (the last qubit); ancillas start in |0>.
        // Amplitudes are real, so bra side = ket side structure.
        if (num_qubits != 18)
            throw std::invalid_argument("build_network: Bell boundary expects 18 qubits");
        const Surface17 s = surface17_layout();
        const std::complex<double> scale = 0.25 / std::sqrt(2.0);
        for (int q = 0; q < 9; ++q) make_quantum(q);
        make_quantum(17);
        std::vector<int> kw(ket.begin(), ket.begin() + 9), bw(bra.begin(), bra.begin() + 9);
        detail::add_codeword_parity_tensors(net, s, kw, ket[17], scale);
        detail::add_codeword_parity_tensors(net, s, bw, bra[17], scale);
        for (int q = 9; q < 17; ++q) prepare_zero(q);
    }

    std::map<int, int> bit_index;  // declared bit id -> index id
    std::vector<std::pair<int, int>> open_bit_indices;  // (bit, index)

    auto advance_channel = [&](const ChoiMatrix& c, const std::vector<int>& qs) {
        if (detail::is_identity_channel(c)) return;
        if (qs.size() == 1 && classical[qs[0]]) {
            const int q = qs[0];
            // Population-preserving channels (damping, dephasing, axis
            // flips) act on a classical wire as a 2x2 stochastic matrix.
            bool diag_preserving = true;
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l)
                        if (k != l && std::abs(c.matrix(i * 2 + k, i * 2 + l)) > 1e-14)
                            diag_preserving = false;
            if (diag_preserving) {
                const double s00 = std::real(c.matrix(0, 0));
                if (known_zero[q] && std::abs(s00 - 1.0) < 1e-14) return;  // |0> is fixed
                const int in = cls[q];
                cls[q] = net.new_index();
                const double s01 = std::real(c.matrix(2, 2));
                net.add_tensor(Tensor{{cls[q], in},
                                      {s00, s01, std::real(c.matrix(1, 1)),
                                       std::real(c.matrix(3, 3))}});
                // A reset-like map sends every input to |0>.
                known_zero[q] =
                    std::abs(s00 - 1.0) < 1e-14 && std::abs(s01 - 1.0) < 1e-14;
                return;
            }
            // Leaves the diagonal manifold: rebuild ket/bra from the
            // classical wire (input density matrix is diag(c)).
            const int cw = cls[q];
            make_quantum(q);
            const auto u = detail::unitary_factor(c);
            if (u) {
                for (int side = 0; side < 2; ++side) {
                    Tensor t{{side == 0 ? ket[q] : bra[q], cw},
                             std::vector<std::complex<double>>(4, 0.0)};
                    for (int r = 0; r < 2; ++r)
                        for (int a = 0; a < 2; ++a)
                            t.data[static_cast<size_t>(r) * 2 + a] =
                                side == 0 ? (*u)(r, a) : std::conj((*u)(r, a));
                    net.add_tensor(std::move(t));
                }
            } else {
                Tensor t{{ket[q], bra[q], cw}, std::vector<std::complex<double>>(8, 0.0)};
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l)
                        for (int a = 0; a < 2; ++a)
                            t.data[(static_cast<size_t>(k) * 2 + l) * 2 + a] =
                                c.matrix(a * 2 + k, a * 2 + l);
                net.add_tensor(std::move(t));
            }
            return;
        }
        for (int q : qs) promote(q);
        const auto u = detail::unitary_factor(c);
        std::vector<int> kin, bin, kout, bout;
        for (int q : qs) {
            kin.push_back(ket[q]);
            bin.push_back(bra[q]);
            ket[q] = net.new_index();
            bra[q] = net.new_index();
            kout.push_back(ket[q]);
            bout.push_back(bra[q]);
        }
        if (u) {
            // Unitary: independent ket and bra factors keep the two sides
            // of the density picture decoupled in the graph.
            const int d = 1 << c.num_qubits;
            for (int side = 0; side < 2; ++side) {
                Tensor t;
                const auto& out_ids = side == 0 ? kout : bout;
                const auto& in_ids = side == 0 ? kin : bin;
                t.indices = out_ids;
                t.indices.insert(t.indices.end(), in_ids.begin(), in_ids.end());
                t.data.resize(static_cast<size_t>(d) * d);
                for (int r = 0; r < d; ++r)
                    for (int a = 0; a < d; ++a)
                        t.data[static_cast<size_t>(r) * d + a] =
                            side == 0 ? (*u)(r, a) : std::conj((*u)(r, a));
                net.add_tensor(std::move(t));
            }
        } else {
            net.add_tensor(detail::choi_tensor(c, kout, bout, kin, bin));
        }
    };

    for (const auto& ev : events) {
        switch (ev.kind) {
            case EventKind::CHANNEL:
                advance_channel(ev.choi, ev.qubits);
                break;
            case EventKind::DIAGONAL: {
                // Qubits pinned to |0> see no phase: slice them out of the
                // diagonal; if nothing non-trivial remains, skip entirely.
                const int n = static_cast<int>(ev.qubits.size());
                std::vector<int> keep;
                for (int i = 0; i < n; ++i)
                    if (!(classical[ev.qubits[i]] && known_zero[ev.qubits[i]])) keep.push_back(i);
                const int r = static_cast<int>(keep.size());
                std::vector<std::complex<double>> diag(size_t(1) << r);
                for (size_t a = 0; a < diag.size(); ++a) {
                    size_t full = 0;
                    for (int j = 0; j < r; ++j)
                        full |= ((a >> (r - 1 - j)) & 1) << (n - 1 - keep[j]);
                    diag[a] = ev.diagonal[full];
                }
                if (r == 0) {
                    const double w = std::norm(diag[0]);
                    if (std::abs(w - 1.0) > 1e-15) net.add_tensor(Tensor{{}, {w}});
                    break;
                }
                bool all_classical = true, unit = true;
                for (int j : keep) all_classical = all_classical && classical[ev.qubits[j]];
                for (const auto& x : diag) unit = unit && std::abs(std::norm(x) - 1.0) < 1e-15;
                if (all_classical && unit) break;  // phases cancel against the conjugate
                std::vector<int> kw, bw;
                for (int j : keep) {
                    const int q = ev.qubits[j];
                    kw.push_back(classical[q] ? cls[q] : ket[q]);
                    bw.push_back(classical[q] ? cls[q] : bra[q]);
                }
                Tensor dk{kw, diag};
                Tensor db{bw, diag};
                for (auto& x : db.data) x = std::conj(x);
                net.add_tensor(std::move(dk));
                net.add_tensor(std::move(db));
                break;
            }
            case EventKind::MEASURE: {
                const int q = ev.qubits[0];
                const int m = net.new_index();
                if (classical[q]) {
                    net.add_tensor(Tensor{{m, cls[q]}, {1.0, 0.0, 0.0, 1.0}});
                } else {
                    // Projector: outcome index tied to both wires in place.
                    Tensor eq{{m, ket[q], bra[q]}, std::vector<std::complex<double>>(8, 0.0)};
                    eq.data[0b000] = 1.0;
                    eq.data[0b111] = 1.0;
                    net.add_tensor(std::move(eq));
                }
                classical[q] = true;
                known_zero[q] = false;
                cls[q] = m;
                int declared = m;
                const double eps = ev.instrument.declaration_error;
                if (eps > 0) {
                    declared = net.new_index();
                    Tensor conf{{declared, m},
                                {1 - eps, eps, eps, 1 - eps}};
                    net.add_tensor(std::move(conf));
                }
                bit_index[ev.bit] = declared;
                if (ev.exposed) open_bit_indices.emplace_back(ev.bit, declared);
                break;
            }
            case EventKind::CONTROLLED_PAULI: {
                const int q = ev.qubits[0];
                auto it = bit_index.find(ev.control_bit);
                if (it == bit_index.end())
                    throw std::invalid_argument("controlled op on unmeasured bit");
                const int c = it->second;
                if (classical[q]) {
                    if (ev.pauli == 'Z') break;  // phases cancel on a diagonal state
                    // X and Y both flip populations when the control fires.
                    const int in = cls[q];
                    cls[q] = net.new_index();
                    known_zero[q] = false;
                    Tensor t{{c, cls[q], in}, std::vector<std::complex<double>>(8, 0.0)};
                    t.data[0b000] = 1.0;
                    t.data[0b011] = 1.0;
                    t.data[0b101] = 1.0;
                    t.data[0b110] = 1.0;
                    net.add_tensor(std::move(t));
                    break;
                }
                if (ev.pauli == 'Z') {
                    // Diagonal in place: (-1)^{c*k} on ket, same on bra.
                    Tensor zk{{c, ket[q]}, {1.0, 1.0, 1.0, -1.0}};
                    Tensor zb{{c, bra[q]}, {1.0, 1.0, 1.0, -1.0}};
                    net.add_tensor(std::move(zk));
                    net.add_tensor(std::move(zb));
                } else {
                    const ComplexMatrix u = pauli_1q(ev.pauli == 'X' ? 1 : 2);
                    for (int side = 0; side < 2; ++side) {
                        std::vector<int>& wire = side == 0 ? ket : bra;
                        const int in = wire[q];
                        wire[q] = net.new_index();
                        Tensor t{{c, wire[q], in},
                                 std::vector<std::complex<double>>(8, 0.0)};
                        t.data[0b000] = 1.0;  // c=0: identity
                        t.data[0b011] = 1.0;
                        for (int r = 0; r < 2; ++r)
                            for (int col = 0; col < 2; ++col)
                                t.data[4 + r * 2 + col] =
                                    side == 0 ? u(r, col) : std::conj(u(r, col));
                        net.add_tensor(std::move(t));
                    }
                }
                break;
            }
        }
    }

    // Final boundary.
    std::vector<int> finals;
    auto trace_cap = [&](int q) {
        if (classical[q])
            net.add_tensor(Tensor{{cls[q]}, {1.0, 1.0}});
        else
            net.add_tensor(Tensor{{ket[q], bra[q]}, {1.0, 0.0, 0.0, 1.0}});
    };
    switch (opts.final_kind) {
        case BoundaryOptions::Final::TRACE:
            for (int q = 0; q < num_qubits; ++q) trace_cap(q);
            break;
        case BoundaryOptions::Final::OPEN_WIRES:
            for (int q = 0; q < num_qubits; ++q) promote(q);
            for (int q = 0; q < num_qubits; ++q) finals.push_back(ket[q]);
            for (int q = 0; q < num_qubits; ++q) finals.push_back(bra[q]);
            break;
        case BoundaryOptions::Final::CODEWORD_ISOMETRY: {
            if (num_qubits != 18)
                throw std::invalid_argument("build_network: isometry expects 18 qubits");
            const Surface17 s = surface17_layout();
            for (int q = 0; q < 9; ++q) promote(q);
            promote(17);
            const int l_ket = net.new_index(), l_bra = net.new_index();
            std::vector<int> kw(ket.begin(), ket.begin() + 9), bw(bra.begin(), bra.begin() + 9);
            detail::add_codeword_parity_tensors(net, s, kw, l_ket, 0.25);
            detail::add_codeword_parity_tensors(net, s, bw, l_bra, 0.25);
            // Measured-out ancillas: trace caps.
            for (int q = 9; q < 17; ++q) trace_cap(q);
            finals = {l_ket, ket[17], l_bra, bra[17]};
            break;
        }
    }

    for (const auto& [bit, idx] : open_bit_indices) {
        net.open_indices.push_back(idx);
        out.open_bits.push_back(bit);
    }
    for (int idx : finals) net.open_indices.push_back(idx);
    out.final_indices = finals;
    return out;
}

inline BuiltNetwork network_from_circuit(const CircuitSchedule& circuit,
                                         const NoiseParameters& params,
                                         const BoundaryOptions& opts) {
    auto events = fuse_events(lower_schedule(circuit, params), circuit.num_qubits);
    return build_network(events, circuit.num_qubits, opts);
}

// Structured text dump: tensor list then hyperedge incidence.
inline std::string dump_network(const TensorNetwork& net) {
    std::ostringstream os;
    for (const auto& [id, t] : net.nodes) {
        os << "tensor " << id << " indices";
        for (int i : t.indices) os << " " << i;
        os << "\n";
    }
    for (const auto& [idx, nodes] : net.hyperedges) {
        os << "edge " << idx << " nodes";
        for (int n : nodes) os << " " << n;
        os << "\n";
    }
    os << "open";
    for (int i : net.open_indices) os << " " << i;
    os << "\n";
    return os.str();
}

}  // namespace surfsim
