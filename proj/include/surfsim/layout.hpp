#pragma once

// Surface-17 layout: qubit coordinates, stabilizers with pure errors,
// connectivity edges, logical operators and the logical codewords.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "surfsim/channel.hpp"

namespace surfsim {

enum class QubitRole { DATA, X_ANCILLA, Z_ANCILLA };

struct QubitId {
    int x = 0;
    int y = 0;
    QubitRole role = QubitRole::DATA;

    bool operator==(const QubitId& o) const { return x == o.x && y == o.y; }
    bool operator<(const QubitId& o) const { return x != o.x ? x < o.x : y < o.y; }
    std::string str() const { return "(" + std::to_string(x) + "," + std::to_string(y) + ")"; }
};

struct StabilizerSpec {
    QubitId ancilla;
    char pauli_type = 'X';           // 'X' or 'Z'
    std::vector<QubitId> support;    // 2 or 4 data qubits
    QubitId pure_error_qubit;        // single data qubit carrying the pure error
    char pure_error_pauli = 'Z';     // Z for X-stabilizers, X for Z-stabilizers
};

struct Surface17 {
    std::vector<QubitId> data;        // 9, sorted
    std::vector<QubitId> x_ancillas;  // 4, listed order
    std::vector<QubitId> z_ancillas;  // 4, listed order
    std::vector<StabilizerSpec> stabilizers;  // X stabilizers first, then Z
    std::vector<std::pair<QubitId, QubitId>> edges;  // 24 data-ancilla pairs
    std::vector<QubitId> logical_x;  // X_L support
    std::vector<QubitId> logical_z;  // Z_L support

    int data_index(const QubitId& q) const {
        for (size_t i = 0; i < data.size(); ++i)
            if (data[i] == q) return static_cast<int>(i);
        throw std::invalid_argument("data_index: not a data qubit " + q.str());
    }

    // Global qubit numbering used by schedules: data 0..8, then X ancillas
    // 9..12, then Z ancillas 13..16.
    int qubit_index(const QubitId& q) const {
        for (size_t i = 0; i < data.size(); ++i)
            if (data[i] == q) return static_cast<int>(i);
        for (size_t i = 0; i < x_ancillas.size(); ++i)
            if (x_ancillas[i] == q) return static_cast<int>(9 + i);
        for (size_t i = 0; i < z_ancillas.size(); ++i)
            if (z_ancillas[i] == q) return static_cast<int>(13 + i);
        throw std::invalid_argument("qubit_index: unknown qubit " + q.str());
    }

    bool is_edge(const QubitId& a, const QubitId& b) const {
        for (const auto& e : edges)
            if ((e.first == a && e.second == b) || (e.first == b && e.second == a)) return true;
        return false;
    }
};

inline Surface17 surface17_layout() {
    Surface17 s;
    for (int x = 0; x <= 4; x += 2)
        for (int y = 0; y <= 4; y += 2) s.data.push_back({x, y, QubitRole::DATA});
    std::sort(s.data.begin(), s.data.end());

    s.x_ancillas = {{1, 1, QubitRole::X_ANCILLA},
                    {3, 3, QubitRole::X_ANCILLA},
                    {-1, 3, QubitRole::X_ANCILLA},
                    {5, 1, QubitRole::X_ANCILLA}};
    s.z_ancillas = {{1, 3, QubitRole::Z_ANCILLA},
                    {3, 1, QubitRole::Z_ANCILLA},
                    {1, -1, QubitRole::Z_ANCILLA},
                    {3, 5, QubitRole::Z_ANCILLA}};

    auto neighbors = [&](const QubitId& a) {
        std::vector<QubitId> out;
        for (const auto& d : s.data)
            if (std::abs(d.x - a.x) == 1 && std::abs(d.y - a.y) == 1) out.push_back(d);
        return out;
    };

    for (const auto& a : s.x_ancillas) {
        StabilizerSpec st;
        st.ancilla = a;
        st.pauli_type = 'X';
        st.support = neighbors(a);
        s.stabilizers.push_back(st);
    }
    for (const auto& a : s.z_ancillas) {
        StabilizerSpec st;
        st.ancilla = a;
        st.pauli_type = 'Z';
        st.support = neighbors(a);
        s.stabilizers.push_back(st);
    }

    for (const auto& st : s.stabilizers)
        for (const auto& d : st.support) s.edges.push_back({st.ancilla, d});

    // Pure error: smallest support qubit whose single-qubit Pauli flips
    // exactly this stabilizer. Candidate Pauli type is the opposite of the
    // stabilizer type.
    for (auto& st : s.stabilizers) {
        const char err = (st.pauli_type == 'X') ? 'Z' : 'X';
        std::vector<QubitId> cands = st.support;
        std::sort(cands.begin(), cands.end());
        bool found = false;
        for (const auto& q : cands) {
            int flips = 0;
            for (const auto& other : s.stabilizers) {
                if (other.pauli_type == err) continue;  // commuting Pauli types
                bool on_support = false;
                for (const auto& sq : other.support) on_support |= (sq == q);
                if (on_support) ++flips;
            }
            bool self_on = false;
            for (const auto& sq : st.support) self_on |= (sq == q);
            if (flips == 1 && self_on) {
                st.pure_error_qubit = q;
                st.pure_error_pauli = err;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("surface17_layout: no pure error for " + st.ancilla.str());
    }

    // Logical operators on the middle lines of the data grid.
    s.logical_x = {{0, 2, QubitRole::DATA}, {2, 2, QubitRole::DATA}, {4, 2, QubitRole::DATA}};
    s.logical_z = {{2, 0, QubitRole::DATA}, {2, 2, QubitRole::DATA}, {2, 4, QubitRole::DATA}};
    return s;
}

// Logical codeword |l_L> as a 512-amplitude vector over the 9 data qubits,
// data qubit 0 = most significant bit.
inline Eigen::VectorXcd logical_codeword(const Surface17& s, int logical) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(512);
    int start = 0;
    if (logical) {
        for (const auto& q : s.logical_x) start ^= 1 << (8 - s.data_index(q));
    }
    v(start) = 1.0;
    // Project onto +1 eigenspace of each X stabilizer: sum over its orbit.
    for (const auto& st : s.stabilizers) {
        if (st.pauli_type != 'X') continue;
        int mask = 0;
        for (const auto& q : st.support) mask ^= 1 << (8 - s.data_index(q));
        Eigen::VectorXcd next = Eigen::VectorXcd::Zero(512);
        for (int x = 0; x < 512; ++x) next(x) = (v(x) + v(x ^ mask));
        v = next;
    }
    v.normalize();
    return v;
}

}  // namespace surfsim
