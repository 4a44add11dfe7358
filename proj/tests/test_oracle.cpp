#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "surfsim/dense_oracle.hpp"
#include "surfsim/oracle_check.hpp"

using namespace surfsim;

TEST_CASE("density simulation applies channels on the right subsystems") {
    // Two qubits, X on qubit 1: |00> -> |01>.
    ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
    rho(0, 0) = 1;
    oracle_detail::apply_on_subsystem(rho, 2, gate_channel(GateKind::PAULI_X), {1});
    CHECK(std::abs(rho(1, 1) - complex_t(1, 0)) < 1e-14);
    // X on qubit 0 (most significant): -> |11>.
    oracle_detail::apply_on_subsystem(rho, 2, gate_channel(GateKind::PAULI_X), {0});
    CHECK(std::abs(rho(3, 3) - complex_t(1, 0)) < 1e-14);
    // CZ on {0,1} flips the sign of |11> coherences only; the population
    // stays put.
    oracle_detail::apply_on_subsystem(rho, 2, gate_channel(GateKind::CZ), {0, 1});
    CHECK(std::abs(rho(3, 3) - complex_t(1, 0)) < 1e-14);
}

TEST_CASE("measurement branches carry outcome probabilities") {
    // One qubit in |+>: measuring gives two branches of probability 1/2.
    CircuitSchedule sched;
    sched.num_qubits = 1;
    sched.ops.push_back({OpKind::RY_PLUS, {0}, 0.0, 0.0});
    ScheduledOp m{OpKind::MEASURE, {0}, 10.0, 0.0};
    m.bit = 0;
    m.exposed = true;
    sched.ops.push_back(m);
    sched.total_duration = 10.0;
    sched.noisy_end = 10.0;
    const OracleResult res = simulate_density(sched, noiseless_parameters(),
                                              DensityMatrix::all_zero(1));
    REQUIRE(res.branches.size() == 2);
    double psum = 0;
    for (const auto& br : res.branches) {
        const double p = br.probability();
        CHECK(p == doctest::Approx(0.5).epsilon(1e-12));
        psum += p;
    }
    CHECK(psum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("channel tomography of a bare gate recovers its choi matrix") {
    CircuitSchedule sched;
    sched.num_qubits = 1;
    sched.ops.push_back({OpKind::RY_MINUS, {0}, 0.0, 0.0});
    sched.total_duration = 0.0;
    sched.noisy_end = 0.0;
    const ChoiMatrix got = channel_tomography(sched, noiseless_parameters(), {0});
    const ChoiMatrix want = gate_channel(GateKind::RY_MINUS);
    CHECK((got.matrix - want.matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("randomized circuits agree between network and dense oracle") {
    // Smaller instance count than the acceptance gate; the full 50-circuit
    // sweep runs in the acceptance binary.
    const OracleCheckResult res = run_oracle_equivalence_suite(8, 2024);
    CHECK(res.circuits == 8);
    CHECK(res.max_deviation < 1e-10);
    CHECK(res.pass);
}
