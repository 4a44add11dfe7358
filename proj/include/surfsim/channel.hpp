#pragma once

// Quantum channel algebra on a small number of qubits: Choi matrices,
// Pauli transfer matrices, Kraus sets, composition and the elementary
// noise channels used by the rest of the simulator.
//
// Conventions (fixed project-wide):
//   - Choi matrix of a channel L on n qubits is the 4^n x 4^n matrix
//       C = sum_{a,b} |a><b|_in (x) L(|a><b|)_out
//     with the *input* factor as the major (left) index: row = a*2^n + k,
//     col = b*2^n + l, so C[(a,k),(b,l)] = <k| L(|a><b|) |l>.
//   - Pauli basis ordering is I, X, Y, Z per qubit; multi-qubit Pauli
//     labels are base-4 digits with qubit 0 as the most significant digit.
//   - PTMs carry the 1/2^n normalization so the identity channel maps to
//     the identity matrix.

#include <Eigen/Dense>
#include <complex>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace surfsim {

using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using complex_t = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct ChoiMatrix {
    int num_qubits = 0;
    ComplexMatrix matrix;  // 4^num_qubits square

    int dim() const { return 1 << num_qubits; }  // Hilbert space dimension

    static ChoiMatrix zero(int n) {
        ChoiMatrix c;
        c.num_qubits = n;
        c.matrix = ComplexMatrix::Zero(1 << (2 * n), 1 << (2 * n));
        return c;
    }
};

struct PauliTransferMatrix {
    int num_qubits = 0;
    RealMatrix matrix;  // 4^num_qubits square, real
};

struct KrausSet {
    int num_qubits = 0;
    std::vector<ComplexMatrix> operators;
};

struct ErrorRateSummary {
    double p_bit = 0.0;
    double p_phase = 0.0;
    double p_y = 0.0;
    Eigen::Vector3d shifts = Eigen::Vector3d::Zero();     // X/Y/Z non-unital shifts
    Eigen::Vector3d rotations = Eigen::Vector3d::Zero();  // X/Y/Z coherent rotation magnitudes
};

struct CptpReport {
    double min_eigenvalue = 0.0;
    double trace_preservation_deviation = 0.0;
    double hermiticity_deviation = 0.0;
    bool passes(double tol) const {
        return min_eigenvalue >= -tol && trace_preservation_deviation <= tol &&
               hermiticity_deviation <= tol;
    }
};

// ---------------------------------------------------------------- Paulis

inline const ComplexMatrix& pauli_1q(int which) {
    static const ComplexMatrix paulis[4] = {
        (ComplexMatrix(2, 2) << 1, 0, 0, 1).finished(),
        (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished(),
        (ComplexMatrix(2, 2) << 0, complex_t(0, -1), complex_t(0, 1), 0).finished(),
        (ComplexMatrix(2, 2) << 1, 0, 0, -1).finished(),
    };
    return paulis[which];
}

// Multi-qubit Pauli b = base-4 label, qubit 0 most significant.
inline ComplexMatrix pauli(int num_qubits, int label) {
    ComplexMatrix m = ComplexMatrix::Identity(1, 1);
    std::vector<int> digits(num_qubits);
    for (int q = num_qubits - 1; q >= 0; --q) {
        digits[q] = label & 3;
        label >>= 2;
    }
    for (int q = num_qubits - 1; q >= 0; --q) {
        ComplexMatrix next(m.rows() * 2, m.cols() * 2);
        const ComplexMatrix& p = pauli_1q(digits[q]);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) next.block(i * m.rows(), j * m.cols(), m.rows(), m.cols()) = p(i, j) * m;
        m = std::move(next);
    }
    return m;
}

// ---------------------------------------------------------- constructors

inline ChoiMatrix choi_from_kraus(const KrausSet& kraus) {
    if (kraus.operators.empty()) throw std::invalid_argument("choi_from_kraus: empty Kraus set");
    const int d = 1 << kraus.num_qubits;
    for (const auto& k : kraus.operators)
        if (k.rows() != d || k.cols() != d)
            throw std::invalid_argument("choi_from_kraus: operator dimension mismatch");
    ChoiMatrix c = ChoiMatrix::zero(kraus.num_qubits);
    for (const auto& k : kraus.operators)
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                        c.matrix(a * d + i, b * d + j) += k(i, a) * std::conj(k(j, b));
    return c;
}

inline ChoiMatrix choi_from_unitary(const ComplexMatrix& u) {
    int n = 0;
    while ((1 << n) < u.rows()) ++n;
    KrausSet ks{n, {u}};
    return choi_from_kraus(ks);
}

inline ChoiMatrix identity_channel(int num_qubits) {
    return choi_from_unitary(ComplexMatrix::Identity(1 << num_qubits, 1 << num_qubits));
}

// L(rho), rho given as a dense matrix over the same qubits.
inline ComplexMatrix apply_channel(const ChoiMatrix& choi, const ComplexMatrix& rho) {
    const int d = choi.dim();
    if (rho.rows() != d || rho.cols() != d)
        throw std::invalid_argument("apply_channel: dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            if (rho(a, b) == complex_t(0, 0)) continue;
            out += rho(a, b) * choi.matrix.block(a * d, b * d, d, d);
        }
    return out;
}

inline PauliTransferMatrix ptm_from_choi(const ChoiMatrix& choi) {
    const int n = choi.num_qubits;
    const int np = 1 << (2 * n);
    PauliTransferMatrix p;
    p.num_qubits = n;
    p.matrix = RealMatrix(np, np);
    const double norm = 1.0 / (1 << n);
    std::vector<ComplexMatrix> sig(np);
    for (int i = 0; i < np; ++i) sig[i] = pauli(n, i);
    for (int j = 0; j < np; ++j) {
        ComplexMatrix lsj = apply_channel(choi, sig[j]);
        for (int i = 0; i < np; ++i) p.matrix(i, j) = norm * (sig[i] * lsj).trace().real();
    }
    return p;
}

inline ChoiMatrix choi_from_ptm(const PauliTransferMatrix& ptm) {
    const int n = ptm.num_qubits;
    const int d = 1 << n;
    const int np = 1 << (2 * n);
    ChoiMatrix c = ChoiMatrix::zero(n);
    const double norm = 1.0 / d;
    for (int i = 0; i < np; ++i)
        for (int j = 0; j < np; ++j) {
            const double pij = ptm.matrix(i, j);
            if (pij == 0.0) continue;
            ComplexMatrix sjt = pauli(n, j).transpose();
            ComplexMatrix si = pauli(n, i);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    for (int k = 0; k < d; ++k)
                        for (int l = 0; l < d; ++l)
                            c.matrix(a * d + k, b * d + l) += norm * pij * sjt(a, b) * si(k, l);
        }
    return c;
}

// Sequential composition; `earlier` is applied first.
inline ChoiMatrix compose(const ChoiMatrix& later, const ChoiMatrix& earlier) {
    if (later.num_qubits != earlier.num_qubits)
        throw std::invalid_argument("compose: qubit count mismatch");
    const int d = later.dim();
    ChoiMatrix c = ChoiMatrix::zero(later.num_qubits);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    complex_t acc = 0;
                    for (int cc = 0; cc < d; ++cc)
                        for (int dd = 0; dd < d; ++dd)
                            acc += earlier.matrix(a * d + cc, b * d + dd) *
                                   later.matrix(cc * d + k, dd * d + l);
                    c.matrix(a * d + k, b * d + l) = acc;
                }
    return c;
}

// Product channel on the concatenated qubit list (a's qubits first).
inline ChoiMatrix tensor_product(const ChoiMatrix& a, const ChoiMatrix& b) {
    const int da = a.dim(), db = b.dim();
    ChoiMatrix c = ChoiMatrix::zero(a.num_qubits + b.num_qubits);
    const int d = da * db;
    for (int a1 = 0; a1 < da; ++a1)
        for (int k1 = 0; k1 < da; ++k1)
            for (int b1 = 0; b1 < da; ++b1)
                for (int l1 = 0; l1 < da; ++l1) {
                    const complex_t va = a.matrix(a1 * da + k1, b1 * da + l1);
                    if (va == complex_t(0, 0)) continue;
                    for (int a2 = 0; a2 < db; ++a2)
                        for (int k2 = 0; k2 < db; ++k2)
                            for (int b2 = 0; b2 < db; ++b2)
                                for (int l2 = 0; l2 < db; ++l2) {
                                    c.matrix((a1 * db + a2) * d + (k1 * db + k2),
                                             (b1 * db + b2) * d + (l1 * db + l2)) =
                                        va * b.matrix(a2 * db + k2, b2 * db + l2);
                                }
                }
    return c;
}

// ------------------------------------------------------- noise channels

inline ChoiMatrix amplitude_damping_channel(double p1) {
    ChoiMatrix c = ChoiMatrix::zero(1);
    const double s = std::sqrt(1.0 - p1);
    c.matrix(0, 0) = 1;
    c.matrix(0, 3) = s;
    c.matrix(3, 0) = s;
    c.matrix(2, 2) = p1;
    c.matrix(3, 3) = 1 - p1;
    return c;
}

inline ChoiMatrix phase_damping_channel(double p_phi) {
    ChoiMatrix c = ChoiMatrix::zero(1);
    const double s = std::sqrt(1.0 - p_phi);
    c.matrix(0, 0) = 1;
    c.matrix(0, 3) = s;
    c.matrix(3, 0) = s;
    c.matrix(3, 3) = 1;
    return c;
}

// Phase damping written directly in terms of the off-diagonal coherence
// factor f (f = 1 is the identity channel, f = sqrt(1-p_phi) otherwise).
inline ChoiMatrix dephasing_factor_channel(double f) {
    ChoiMatrix c = ChoiMatrix::zero(1);
    c.matrix(0, 0) = 1;
    c.matrix(0, 3) = f;
    c.matrix(3, 0) = f;
    c.matrix(3, 3) = 1;
    return c;
}

// Amplitude-phase damping over an idle interval of length t.
inline ChoiMatrix idle_channel(double t, double t1, double t_phi) {
    if (t1 <= 0 || t_phi <= 0) throw std::invalid_argument("idle_channel: T1, Tphi must be positive");
    if (t < 0) throw std::invalid_argument("idle_channel: negative duration");
    const double p1 = 1.0 - std::exp(-t / t1);
    const double pphi = 1.0 - std::exp(-t / t_phi);
    return compose(phase_damping_channel(pphi), amplitude_damping_channel(p1));
}

// Discard the state and prepare |0>: Lambda(rho) = tr(rho) |0><0|.
inline ChoiMatrix reset_channel() {
    ChoiMatrix c = ChoiMatrix::zero(1);
    c.matrix(0, 0) = 1.0;  // (a=0,k=0),(b=0,l=0)
    c.matrix(2, 2) = 1.0;  // (a=1,k=0),(b=1,l=0)
    return c;
}

// Depolarizing error of the RY gates: stronger in the x-z plane, weaker
// along the y axis.
inline ChoiMatrix anisotropic_depolarizing(double p_plane, double p_axis) {
    if (p_plane < 0 || p_plane > 1 || p_axis < 0 || p_axis > 1)
        throw std::invalid_argument("anisotropic_depolarizing: probability out of range");
    ChoiMatrix c = ChoiMatrix::zero(1);
    const double hp = p_plane / 2, ha = p_axis / 2;
    c.matrix(0, 0) = 1 - hp;
    c.matrix(0, 3) = 1 - hp - ha;
    c.matrix(1, 1) = hp;
    c.matrix(1, 2) = -hp + ha;
    c.matrix(2, 1) = -hp + ha;
    c.matrix(2, 2) = hp;
    c.matrix(3, 0) = 1 - hp - ha;
    c.matrix(3, 3) = 1 - hp;
    return c;
}

// Residual-photon dephasing accumulated over [t1, t2]. Returns the
// coherence factor: 1 means no dephasing. `t_m` is the start of the
// measurement period, `t_g` the basis-rotation time, kappa the photon
// relaxation rate and chi the dispersive shift.
inline double photon_dephasing_probability(double t1, double t2, double t_m, double t_g,
                                           double kappa, double chi, double alpha0) {
    if (kappa <= 0) throw std::invalid_argument("photon_dephasing_probability: kappa <= 0");
    if (t2 < t1) throw std::invalid_argument("photon_dephasing_probability: t2 < t1");
    auto antiderivative = [&](double t) {
        return std::exp(-kappa * t) * (-kappa * std::sin(2 * chi * t) - 2 * chi * std::cos(2 * chi * t)) /
               (4 * chi * chi + kappa * kappa);
    };
    const double bracket = antiderivative(t2 - t_g) - antiderivative(t1 - t_g);
    return std::exp(2 * chi * alpha0 * std::exp(kappa * (t_m - t_g)) * bracket);
}

// ----------------------------------------------------------- gate set

enum class GateKind { RY_PLUS, RY_MINUS, HADAMARD, CZ, CPHASE, PAULI_X, PAULI_Y, PAULI_Z };

inline ComplexMatrix gate_unitary(GateKind kind, double theta = 0.0) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case GateKind::RY_PLUS:
            return (ComplexMatrix(2, 2) << s, -s, s, s).finished();
        case GateKind::RY_MINUS:
            return (ComplexMatrix(2, 2) << s, s, -s, s).finished();
        case GateKind::HADAMARD:
            return (ComplexMatrix(2, 2) << s, s, s, -s).finished();
        case GateKind::PAULI_X:
            return pauli_1q(1);
        case GateKind::PAULI_Y:
            return pauli_1q(2);
        case GateKind::PAULI_Z:
            return pauli_1q(3);
        case GateKind::CZ: {
            ComplexMatrix u = ComplexMatrix::Identity(4, 4);
            u(3, 3) = -1;
            return u;
        }
        case GateKind::CPHASE: {
            ComplexMatrix u = ComplexMatrix::Identity(4, 4);
            u(3, 3) = std::exp(complex_t(0, theta));
            return u;
        }
    }
    throw std::invalid_argument("gate_unitary: unknown gate kind");
}

inline ChoiMatrix gate_channel(GateKind kind, double theta = 0.0) {
    return choi_from_unitary(gate_unitary(kind, theta));
}

// ----------------------------------------------------------- diagnostics

inline CptpReport cptp_check(const ChoiMatrix& choi) {
    CptpReport r;
    const auto& m = choi.matrix;
    r.hermiticity_deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((m + m.adjoint()) / 2.0);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    const int d = choi.dim();
    ComplexMatrix tr_out = ComplexMatrix::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int k = 0; k < d; ++k) tr_out(a, b) += m(a * d + k, b * d + k);
    r.trace_preservation_deviation = (tr_out - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    return r;
}

inline ErrorRateSummary error_rates_from_ptm(const PauliTransferMatrix& ptm) {
    if (ptm.num_qubits != 1)
        throw std::invalid_argument("error_rates_from_ptm: single-qubit PTM required");
    const auto& p = ptm.matrix;
    ErrorRateSummary e;
    e.p_phase = (1 - p(1, 1)) / 2;
    e.p_y = (1 - p(2, 2)) / 2;
    e.p_bit = (1 - p(3, 3)) / 2;
    e.shifts = Eigen::Vector3d(p(1, 0), p(2, 0), p(3, 0));
    // Symmetrized magnitudes of the coherent rotation blocks.
    e.rotations = Eigen::Vector3d((std::abs(p(2, 3)) + std::abs(p(3, 2))) / 2,   // X rotation
                                  (std::abs(p(1, 3)) + std::abs(p(3, 1))) / 2,   // Y rotation
                                  (std::abs(p(1, 2)) + std::abs(p(2, 1))) / 2);  // Z rotation
    return e;
}

}  // namespace surfsim
