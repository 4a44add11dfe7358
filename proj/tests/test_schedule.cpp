#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "surfsim/schedule.hpp"

using namespace surfsim;

namespace {

int count_kind(const CircuitSchedule& s, OpKind k) {
    int n = 0;
    for (const auto& op : s.ops) n += op.kind == k;
    return n;
}

}  // namespace

TEST_CASE("one syndrome round has the expected structure") {
    const NoiseParameters p = default_parameters();
    const CircuitSchedule s = syndrome_round_schedule(p);
    // X half: 4 ancilla RY+ + 9 data RY-, then mirrored; Z half: ancillas only.
    CHECK(count_kind(s, OpKind::RY_PLUS) == 4 + 9 + 4);
    CHECK(count_kind(s, OpKind::RY_MINUS) == 4 + 9 + 4);
    // 4 CZ layers x 4 ancillas per half, minus boundary ancillas' missing
    // neighbors: total CZ count equals the 24 edges touched once per half.
    CHECK(count_kind(s, OpKind::CZ) == 24);
    CHECK(count_kind(s, OpKind::MEASURE) == 8);
    CHECK(s.cz_regions.size() == 2);
    // Half-round duration: rotation + 4 CZ layers + rotation + measure + depletion.
    const double half = p.T_g1Q + 4 * p.T_g2Q + p.T_g1Q + p.tau_m + p.tau_d;
    CHECK(s.total_duration == doctest::Approx(2 * half));
    // Measurement bits: X ancillas 0..3, Z ancillas 4..7.
    std::set<int> bits;
    for (const auto& op : s.ops)
        if (op.kind == OpKind::MEASURE) bits.insert(op.bit);
    CHECK(bits == std::set<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("crosstalk insertion places one cphase per pair per noisy region") {
    const Surface17 lay = surface17_layout();
    const NoiseParameters p = default_parameters();
    CircuitSchedule s = syndrome_round_schedule(p);
    CrosstalkSpec spec;
    spec.kt_region = 0.03;
    const CircuitSchedule with = insert_crosstalk(s, lay, spec);
    CHECK(count_kind(with, OpKind::CPHASE) == 2 * 24);
    for (const auto& op : with.ops)
        if (op.kind == OpKind::CPHASE) {
            CHECK(op.xtalk);
            CHECK(op.theta == doctest::Approx(-4 * 0.03));
            // Placed at a region end.
            bool at_end = false;
            for (const auto& r : with.cz_regions) at_end |= std::abs(op.midpoint() - r.end) < 1e-9;
            CHECK(at_end);
        }
    // kt = 0 is a no-op; non-edges are rejected.
    CrosstalkSpec off;
    CHECK(insert_crosstalk(s, lay, off).ops.size() == s.ops.size());
    CrosstalkSpec bad = spec;
    bad.pairs = {{lay.data[0], lay.data[1]}};
    CHECK_THROWS_AS(insert_crosstalk(s, lay, bad), std::invalid_argument);
}

TEST_CASE("compensation retunes hosting czs to cphase(pi + 4kt)") {
    const Surface17 lay = surface17_layout();
    const NoiseParameters p = default_parameters();
    CircuitSchedule s = syndrome_round_schedule(p);
    CrosstalkSpec spec;
    spec.kt_region = 0.02;
    CircuitSchedule with = insert_crosstalk(s, lay, spec);
    const CircuitSchedule comp = compensate_cz(with, spec);
    // Each edge hosts one CZ per round (X edges in the X half, Z edges in
    // the Z half); that CZ gets retuned so gate * crosstalk = exact CZ. The
    // strays themselves remain in the schedule.
    int strays = 0, retuned = 0;
    for (const auto& op : comp.ops) {
        if (op.kind != OpKind::CPHASE) continue;
        if (op.xtalk) {
            ++strays;
            CHECK(op.theta == doctest::Approx(-4 * 0.02));
        } else {
            ++retuned;
            CHECK(op.theta == doctest::Approx(kPi + 4 * 0.02));
        }
    }
    CHECK(retuned == 24);
    CHECK(strays == 2 * 24);  // one per pair per region, untouched
    CHECK(count_kind(comp, OpKind::CZ) == 0);
}

TEST_CASE("a crosstalk cphase can be moved within its region only") {
    const Surface17 lay = surface17_layout();
    const NoiseParameters p = default_parameters();
    CrosstalkSpec spec;
    spec.kt_region = 0.03;
    const CircuitSchedule with = insert_crosstalk(syndrome_round_schedule(p), lay, spec);
    const auto pair = with.cz_regions[0];
    const std::pair<QubitId, QubitId> edge = lay.edges[0];
    const CircuitSchedule moved = move_cphase(with, lay, edge, pair.end, pair.begin);
    bool found = false;
    for (const auto& op : moved.ops)
        if (op.kind == OpKind::CPHASE && op.xtalk && std::abs(op.start - pair.begin) < 1e-9 &&
            (op.qubits[0] == lay.qubit_index(edge.first) ||
             op.qubits[1] == lay.qubit_index(edge.first)))
            found = true;
    CHECK(found);
    CHECK_THROWS_AS(move_cphase(with, lay, edge, pair.end, pair.end + 1e6),
                    std::invalid_argument);
    CHECK_THROWS_AS(move_cphase(with, lay, edge, pair.begin + 1.0, pair.begin),
                    std::invalid_argument);
}

TEST_CASE("memory experiment exposes one bit block per round plus the final round") {
    const NoiseParameters p = default_parameters();
    const CrosstalkSpec none;
    for (int rounds : {1, 2}) {
        const MemoryExperimentCircuit mec = memory_experiment_circuit(rounds, p, none);
        CHECK(mec.rounds == rounds);
        CHECK(static_cast<int>(mec.open_bits.size()) == 8 * (rounds + 1));
        CHECK(mec.circuit.num_qubits == 18);
        // k noisy rounds + 1 noiseless round of measurements.
        CHECK(count_kind(mec.circuit, OpKind::MEASURE) == 8 * (rounds + 1));
        CHECK(count_kind(mec.circuit, OpKind::RESET) == 8);
        CHECK(count_kind(mec.circuit, OpKind::CORRECT) == 8);
        // Final round and corrections are noiseless; corrections read the
        // final round's bits.
        for (const auto& op : mec.circuit.ops) {
            if (op.kind == OpKind::CORRECT) {
                CHECK(!op.noisy);
                CHECK(op.bit >= rounds * 8);
                CHECK(op.bit < (rounds + 1) * 8);
            }
            if (op.kind == OpKind::MEASURE && op.midpoint() > mec.circuit.noisy_end)
                CHECK(!op.noisy);
        }
        MemoryExperimentOptions consume;
        consume.expose_final_round = false;
        CHECK(memory_experiment_circuit(rounds, p, none, consume).open_bits.size() ==
              size_t(8 * rounds));
    }
    CHECK_THROWS_AS(memory_experiment_circuit(0, p, none), std::invalid_argument);
}

TEST_CASE("crosstalk in the memory experiment spares the noiseless round") {
    const NoiseParameters p = default_parameters();
    CrosstalkSpec spec;
    spec.kt_region = 0.03;
    const MemoryExperimentCircuit mec = memory_experiment_circuit(1, p, spec);
    for (const auto& op : mec.circuit.ops)
        if (op.kind == OpKind::CPHASE) CHECK(op.midpoint() <= mec.circuit.noisy_end + 1e-9);
    // 1 noisy round = 2 regions x 24 pairs.
    CHECK(count_kind(mec.circuit, OpKind::CPHASE) == 48);
}

TEST_CASE("schedule dump lists ops with their parameters") {
    const NoiseParameters p = default_parameters();
    CrosstalkSpec spec;
    spec.kt_region = 0.01;
    const MemoryExperimentCircuit mec = memory_experiment_circuit(1, p, spec);
    const std::string text = mec.circuit.dump();
    CHECK(text.find("MEASURE") != std::string::npos);
    CHECK(text.find("CPHASE") != std::string::npos);
    CHECK(text.find("theta=-0.04") != std::string::npos);
    CHECK(text.find("CORRECT") != std::string::npos);
    CHECK(text.find("RESET") != std::string::npos);
    CHECK(text.find("noiseless") != std::string::npos);
    CHECK(text.find("open") != std::string::npos);
}
