#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "surfsim/channel.hpp"
#include "surfsim/noise.hpp"

using namespace surfsim;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Damping Choi matrices written out literally from their Kraus forms, as an
// independent reference for the channel constructors.
ComplexMatrix amp_damping_reference(double p1) {
    ComplexMatrix c = ComplexMatrix::Zero(4, 4);
    const double s = std::sqrt(1 - p1);
    c(0, 0) = 1;
    c(0, 3) = s;
    c(3, 0) = s;
    c(2, 2) = p1;
    c(3, 3) = 1 - p1;
    return c;
}

ComplexMatrix phase_damping_reference(double pphi) {
    ComplexMatrix c = ComplexMatrix::Zero(4, 4);
    const double s = std::sqrt(1 - pphi);
    c(0, 0) = 1;
    c(0, 3) = s;
    c(3, 0) = s;
    c(3, 3) = 1;
    return c;
}

}  // namespace

TEST_CASE("pauli matrices multiply correctly") {
    // XY = iZ, qubit-0-major multi-qubit labels.
    ComplexMatrix xy = pauli_1q(1) * pauli_1q(2);
    CHECK(max_abs(xy - complex_t(0, 1) * pauli_1q(3)) < 1e-15);
    ComplexMatrix xz = pauli(2, 0b0111);  // qubit0 = X, qubit1 = Z
    ComplexMatrix ref = ComplexMatrix::Zero(4, 4);
    ref(0, 2) = 1;
    ref(1, 3) = -1;
    ref(2, 0) = 1;
    ref(3, 1) = -1;
    CHECK(max_abs(xz - ref) < 1e-15);
}

TEST_CASE("choi of a unitary acts by conjugation") {
    const ComplexMatrix u = gate_unitary(GateKind::RY_PLUS);
    const ChoiMatrix c = choi_from_unitary(u);
    ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
    rho(0, 0) = 0.25;
    rho(0, 1) = complex_t(0.1, 0.2);
    rho(1, 0) = std::conj(rho(0, 1));
    rho(1, 1) = 0.75;
    CHECK(max_abs(apply_channel(c, rho) - u * rho * u.adjoint()) < 1e-14);
}

TEST_CASE("ptm/choi round trip and identity normalization") {
    const ChoiMatrix amp = amplitude_damping_channel(0.13);
    const PauliTransferMatrix ptm = ptm_from_choi(amp);
    CHECK(max_abs(choi_from_ptm(ptm).matrix - amp.matrix) < 1e-13);
    const PauliTransferMatrix id = ptm_from_choi(identity_channel(1));
    CHECK((id.matrix - RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
    const PauliTransferMatrix id2 = ptm_from_choi(identity_channel(2));
    CHECK((id2.matrix - RealMatrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("composition matches matrix action and ptm product") {
    const ChoiMatrix a = amplitude_damping_channel(0.2);
    const ChoiMatrix b = phase_damping_channel(0.35);
    const ChoiMatrix ba = compose(b, a);
    // PTM of a composition is the product of PTMs (later on the left).
    CHECK((ptm_from_choi(ba).matrix - ptm_from_choi(b).matrix * ptm_from_choi(a).matrix)
              .cwiseAbs()
              .maxCoeff() < 1e-13);
}

TEST_CASE("tensor product acts independently on both qubits") {
    const ChoiMatrix a = amplitude_damping_channel(0.3);
    const ChoiMatrix b = gate_channel(GateKind::PAULI_X);
    const ChoiMatrix ab = tensor_product(a, b);
    ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
    rho(0, 0) = 1;  // |00><00|
    ComplexMatrix out = apply_channel(ab, rho);
    // Qubit 0 stays |0> under damping; qubit 1 flips to |1>.
    CHECK(std::abs(out(1, 1) - complex_t(1, 0)) < 1e-14);
    CHECK(std::abs(out.trace() - complex_t(1, 0)) < 1e-14);
}

TEST_CASE("all elementary channel constructors are CPTP") {
    const double tol = 1e-12;
    CHECK(cptp_check(amplitude_damping_channel(0.17)).passes(tol));
    CHECK(cptp_check(phase_damping_channel(0.42)).passes(tol));
    CHECK(cptp_check(dephasing_factor_channel(0.9)).passes(tol));
    CHECK(cptp_check(idle_channel(500, 30000, 60000)).passes(tol));
    CHECK(cptp_check(anisotropic_depolarizing(5e-4, 1e-4)).passes(tol));
    CHECK(cptp_check(reset_channel()).passes(tol));
    CHECK(cptp_check(gate_channel(GateKind::CZ)).passes(tol));
    CHECK(cptp_check(gate_channel(GateKind::CPHASE, 0.7)).passes(tol));
    CHECK(cptp_check(gate_channel(GateKind::RY_MINUS)).passes(tol));
    const NoiseParameters p;
    CHECK(cptp_check(noisy_gate(GateKind::RY_PLUS, p.T_g1Q, p)).passes(tol));
    CHECK(cptp_check(noisy_gate(GateKind::CZ, p.T_g2Q, p)).passes(tol));
    // The two measurement outcome maps are CP and sum to a TP map.
    const MeasurementInstrument inst = measurement_instrument(p);
    ChoiMatrix sum = ChoiMatrix::zero(1);
    sum.matrix = inst.outcome_maps[0].matrix + inst.outcome_maps[1].matrix;
    CHECK(cptp_check(sum).passes(tol));
    CHECK(cptp_check(inst.outcome_maps[0]).min_eigenvalue >= -tol);
    CHECK(cptp_check(inst.outcome_maps[1]).min_eigenvalue >= -tol);
}

TEST_CASE("idle damping forms a semigroup") {
    const double t1 = 30000, tphi = 60000;
    for (auto [ta, tb] : {std::pair{100.0, 250.0}, {40.0, 40.0}, {700.0, 1.5}}) {
        const ChoiMatrix split = compose(idle_channel(tb, t1, tphi), idle_channel(ta, t1, tphi));
        const ChoiMatrix whole = idle_channel(ta + tb, t1, tphi);
        CHECK(max_abs(split.matrix - whole.matrix) < 1e-12);
        // The two damping factors commute.
        const ChoiMatrix swapped = compose(idle_channel(ta, t1, tphi), idle_channel(tb, t1, tphi));
        CHECK(max_abs(split.matrix - swapped.matrix) < 1e-12);
    }
}

TEST_CASE("damping choi matrices match the closed form at three parameter values") {
    for (double p1 : {0.05, 0.3, 0.77}) {
        CHECK(max_abs(amplitude_damping_channel(p1).matrix - amp_damping_reference(p1)) < 1e-15);
    }
    for (double pphi : {0.02, 0.5, 0.9}) {
        CHECK(max_abs(phase_damping_channel(pphi).matrix - phase_damping_reference(pphi)) < 1e-15);
    }
    // Exponential decay of the damping parameters with idle time.
    const double t = 123.0, t1 = 30000, tphi = 60000;
    const double p1 = 1 - std::exp(-t / t1), pphi = 1 - std::exp(-t / tphi);
    const ChoiMatrix ref_idle = compose(phase_damping_channel(pphi), amplitude_damping_channel(p1));
    CHECK(max_abs(idle_channel(t, t1, tphi).matrix - ref_idle.matrix) < 1e-15);
}

TEST_CASE("anisotropic depolarizing shrinks the plane more than the axis") {
    const PauliTransferMatrix ptm = ptm_from_choi(anisotropic_depolarizing(5e-4, 1e-4));
    CHECK(ptm.matrix(1, 1) == doctest::Approx(1 - 5e-4).epsilon(1e-12));
    CHECK(ptm.matrix(3, 3) == doctest::Approx(1 - 5e-4).epsilon(1e-12));
    CHECK(ptm.matrix(2, 2) == doctest::Approx(1 - 1e-4).epsilon(1e-12));
}

TEST_CASE("reset channel sends everything to |0>") {
    ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
    rho(0, 0) = 0.3;
    rho(1, 1) = 0.7;
    rho(0, 1) = rho(1, 0) = 0.1;
    const ComplexMatrix out = apply_channel(reset_channel(), rho);
    CHECK(std::abs(out(0, 0) - complex_t(1, 0)) < 1e-15);
    CHECK(max_abs(out) - 1.0 < 1e-15);
}

TEST_CASE("photon dephasing is trivial without photons and damps otherwise") {
    const NoiseParameters p = default_parameters();
    CHECK(max_abs(photon_dephasing_channel(0, 200, 0, 10, p).matrix -
                  identity_channel(1).matrix) < 1e-15);
    NoiseParameters q = p;
    q.alpha0 = 0.1;
    const ChoiMatrix c = photon_dephasing_channel(600, 800, 0, 10, q);
    const double f = c.matrix(0, 3).real();
    CHECK(f < 1.0);
    CHECK(f > 0.0);
    CHECK(cptp_check(c).passes(1e-12));
    // Later intervals see fewer photons, hence less dephasing.
    const double f_late = photon_dephasing_channel(1600, 1800, 0, 10, q).matrix(0, 3).real();
    CHECK(f_late > f);
}

TEST_CASE("error rates are read off a pauli channel's ptm") {
    // Channel p_I=0.9, p_X=0.04, p_Y=0.03, p_Z=0.03.
    PauliTransferMatrix ptm;
    ptm.num_qubits = 1;
    ptm.matrix = RealMatrix::Identity(4, 4);
    const double px = 0.04, py = 0.03, pz = 0.03;
    ptm.matrix(1, 1) = 1 - 2 * (py + pz);
    ptm.matrix(2, 2) = 1 - 2 * (px + pz);
    ptm.matrix(3, 3) = 1 - 2 * (px + py);
    const ErrorRateSummary e = error_rates_from_ptm(ptm);
    CHECK(e.p_phase == doctest::Approx(py + pz).epsilon(1e-12));
    CHECK(e.p_y == doctest::Approx(px + pz).epsilon(1e-12));
    CHECK(e.p_bit == doctest::Approx(px + py).epsilon(1e-12));
}

TEST_CASE("noisy gates sandwich the ideal gate between idle halves") {
    const NoiseParameters p = default_parameters();
    const ChoiMatrix got = noisy_gate(GateKind::CZ, p.T_g2Q, p);
    const ChoiMatrix half = tensor_product(idle_channel(p.T_g2Q / 2, p.T1, p.T_phi),
                                           idle_channel(p.T_g2Q / 2, p.T1, p.T_phi));
    const ChoiMatrix ref = compose(half, compose(gate_channel(GateKind::CZ), half));
    CHECK(max_abs(got.matrix - ref.matrix) < 1e-14);

    const ChoiMatrix ry = noisy_gate(GateKind::RY_PLUS, p.T_g1Q, p);
    const ChoiMatrix h1 = idle_channel(p.T_g1Q / 2, p.T1, p.T_phi);
    const ChoiMatrix ref1 = compose(
        h1, compose(compose(anisotropic_depolarizing(p.p_plane, p.p_axis),
                            gate_channel(GateKind::RY_PLUS)),
                    h1));
    CHECK(max_abs(ry.matrix - ref1.matrix) < 1e-14);
}
