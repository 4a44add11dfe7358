#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "surfsim/layout.hpp"

using namespace surfsim;

namespace {

// Z2 symplectic support vectors over the 9 data qubits.
struct PauliMask {
    int x = 0;  // X-part support bits
    int z = 0;  // Z-part support bits
};

PauliMask stabilizer_mask(const Surface17& s, const StabilizerSpec& st) {
    PauliMask m;
    for (const auto& q : st.support) {
        const int bit = 1 << s.data_index(q);
        if (st.pauli_type == 'X')
            m.x ^= bit;
        else
            m.z ^= bit;
    }
    return m;
}

int popcount(int v) { return __builtin_popcount(static_cast<unsigned>(v)); }

bool commute(const PauliMask& a, const PauliMask& b) {
    return (popcount(a.x & b.z) + popcount(a.z & b.x)) % 2 == 0;
}

}  // namespace

TEST_CASE("layout has 17 distinct qubits on the expected grid") {
    const Surface17 s = surface17_layout();
    CHECK(s.data.size() == 9);
    CHECK(s.x_ancillas.size() == 4);
    CHECK(s.z_ancillas.size() == 4);
    std::set<std::pair<int, int>> seen;
    for (const auto& q : s.data) seen.insert({q.x, q.y});
    for (const auto& q : s.x_ancillas) seen.insert({q.x, q.y});
    for (const auto& q : s.z_ancillas) seen.insert({q.x, q.y});
    CHECK(seen.size() == 17);
    // Global numbering is total and consistent.
    std::set<int> ids;
    for (const auto& q : s.data) ids.insert(s.qubit_index(q));
    for (const auto& q : s.x_ancillas) ids.insert(s.qubit_index(q));
    for (const auto& q : s.z_ancillas) ids.insert(s.qubit_index(q));
    CHECK(ids.size() == 17);
    CHECK(*ids.begin() == 0);
    CHECK(*ids.rbegin() == 16);
}

TEST_CASE("stabilizers commute pairwise and have weight 2 or 4") {
    const Surface17 s = surface17_layout();
    CHECK(s.stabilizers.size() == 8);
    int weight4 = 0;
    for (const auto& st : s.stabilizers) {
        CHECK((st.support.size() == 2 || st.support.size() == 4));
        weight4 += st.support.size() == 4;
    }
    CHECK(weight4 == 4);  // 4 bulk plaquettes, 4 boundary half-plaquettes
    for (size_t i = 0; i < s.stabilizers.size(); ++i)
        for (size_t j = i + 1; j < s.stabilizers.size(); ++j)
            CHECK(commute(stabilizer_mask(s, s.stabilizers[i]),
                          stabilizer_mask(s, s.stabilizers[j])));
}

TEST_CASE("logical operators commute with stabilizers and anticommute with each other") {
    const Surface17 s = surface17_layout();
    PauliMask lx, lz;
    for (const auto& q : s.logical_x) lx.x ^= 1 << s.data_index(q);
    for (const auto& q : s.logical_z) lz.z ^= 1 << s.data_index(q);
    for (const auto& st : s.stabilizers) {
        CHECK(commute(lx, stabilizer_mask(s, st)));
        CHECK(commute(lz, stabilizer_mask(s, st)));
    }
    CHECK(!commute(lx, lz));
}

TEST_CASE("each pure error flips exactly its own stabilizer") {
    const Surface17 s = surface17_layout();
    for (size_t i = 0; i < s.stabilizers.size(); ++i) {
        const auto& st = s.stabilizers[i];
        PauliMask err;
        const int bit = 1 << s.data_index(st.pure_error_qubit);
        if (st.pure_error_pauli == 'X')
            err.x ^= bit;
        else
            err.z ^= bit;
        for (size_t j = 0; j < s.stabilizers.size(); ++j) {
            const bool flips = !commute(err, stabilizer_mask(s, s.stabilizers[j]));
            CHECK(flips == (i == j));
        }
    }
}

TEST_CASE("connectivity has 24 edges matching stabilizer supports") {
    const Surface17 s = surface17_layout();
    CHECK(s.edges.size() == 24);
    for (const auto& [a, d] : s.edges) {
        CHECK((std::abs(a.x - d.x) == 1 && std::abs(a.y - d.y) == 1));
        CHECK(s.is_edge(a, d));
        CHECK(s.is_edge(d, a));
    }
    CHECK(!s.is_edge(s.data[0], s.data[1]));
}

TEST_CASE("logical codewords are stabilized, orthogonal and flipped by X_L") {
    const Surface17 s = surface17_layout();
    const Eigen::VectorXcd zero = logical_codeword(s, 0);
    const Eigen::VectorXcd one = logical_codeword(s, 1);
    CHECK(std::abs(zero.norm() - 1.0) < 1e-14);
    CHECK(std::abs(one.norm() - 1.0) < 1e-14);
    CHECK(std::abs(zero.dot(one)) < 1e-14);
    // Stabilizer action: X stabilizers permute bit strings, Z stabilizers
    // apply signs. Both must fix the codewords.
    for (const auto& st : s.stabilizers) {
        int mask = 0;
        for (const auto& q : st.support) mask ^= 1 << (8 - s.data_index(q));
        for (const Eigen::VectorXcd* v : {&zero, &one}) {
            Eigen::VectorXcd w(512);
            for (int x = 0; x < 512; ++x)
                w(x) = st.pauli_type == 'X' ? (*v)(x ^ mask)
                                            : (popcount(x & mask) % 2 ? -(*v)(x) : (*v)(x));
            CHECK((w - *v).cwiseAbs().maxCoeff() < 1e-13);
        }
    }
    // X_L maps |0_L> to |1_L>; Z_L gives |1_L> a -1 sign.
    int xmask = 0, zmask = 0;
    for (const auto& q : s.logical_x) xmask ^= 1 << (8 - s.data_index(q));
    for (const auto& q : s.logical_z) zmask ^= 1 << (8 - s.data_index(q));
    Eigen::VectorXcd flipped(512);
    for (int x = 0; x < 512; ++x) flipped(x) = zero(x ^ xmask);
    CHECK((flipped - one).cwiseAbs().maxCoeff() < 1e-13);
    Eigen::VectorXcd signed1(512);
    for (int x = 0; x < 512; ++x) signed1(x) = popcount(x & zmask) % 2 ? -one(x) : one(x);
    CHECK((signed1 + one).cwiseAbs().maxCoeff() < 1e-13);
}
