#pragma once

// The device error model: experimental parameter set, noisy-gate dressing
// and the two-outcome measurement instrument with declaration error.

#include "surfsim/channel.hpp"

namespace surfsim {

struct NoiseParameters {
    // Times in ns, rates in 1/ns, chi in rad/ns.
    double T1 = 30000.0;
    double T_phi = 60000.0;
    double T_g1Q = 20.0;
    double T_g2Q = 40.0;
    double tau_c = 200.0;
    double tau_d = 300.0;
    double tau_d_fast = 100.0;
    double tau_m = 300.0;
    double tau_m_fast = 100.0;
    double p_axis = 1e-4;
    double p_plane = 5e-4;
    double eps_RO = 0.0015;
    double kappa = 1.0 / 250.0;
    double chi = -2.6 * kPi * 1e-3;  // chi/pi = -2.6 MHz
    double alpha0 = 0.0;             // initial photon number; 0 disables photon dephasing
    double k_xtalk = 0.03;           // dimensionless k*t per CZ-region; CPHASE angle = 4*k_xtalk

    bool noiseless() const {
        return T1 >= 1e18 && T_phi >= 1e18 && p_axis == 0 && p_plane == 0 && eps_RO == 0 &&
               alpha0 == 0;
    }
};

inline NoiseParameters default_parameters() { return NoiseParameters{}; }

inline NoiseParameters noiseless_parameters() {
    NoiseParameters p;
    p.T1 = 1e18;
    p.T_phi = 1e18;
    p.p_axis = 0;
    p.p_plane = 0;
    p.eps_RO = 0;
    p.alpha0 = 0;
    return p;
}

// idle(d/2) o gate_error o ideal_gate o idle(d/2). Gate error is the
// anisotropic depolarizing channel for RY gates and identity for CZ.
inline ChoiMatrix noisy_gate(GateKind kind, double duration, const NoiseParameters& params,
                             double theta = 0.0) {
    if (duration < 0) throw std::invalid_argument("noisy_gate: negative duration");
    ChoiMatrix ideal = gate_channel(kind, theta);
    ChoiMatrix half = idle_channel(duration / 2, params.T1, params.T_phi);
    if (ideal.num_qubits == 2) half = tensor_product(half, idle_channel(duration / 2, params.T1, params.T_phi));
    ChoiMatrix dressed = ideal;
    if (kind == GateKind::RY_PLUS || kind == GateKind::RY_MINUS || kind == GateKind::HADAMARD)
        dressed = compose(anisotropic_depolarizing(params.p_plane, params.p_axis), ideal);
    return compose(half, compose(dressed, half));
}

struct MeasurementInstrument {
    ChoiMatrix outcome_maps[2];  // completely positive, sum is trace preserving
    double declaration_error = 0.0;
};

// Computational-basis projectors dressed with tau_m/2 idle damping on both
// sides; each reported outcome mixes in the opposite projector with eps_RO.
inline MeasurementInstrument measurement_instrument(const NoiseParameters& params) {
    ChoiMatrix proj[2];
    for (int m = 0; m < 2; ++m) {
        ComplexMatrix p = ComplexMatrix::Zero(2, 2);
        p(m, m) = 1;
        proj[m] = choi_from_kraus(KrausSet{1, {p}});
    }
    ChoiMatrix half = idle_channel(params.tau_m / 2, params.T1, params.T_phi);
    for (int m = 0; m < 2; ++m) proj[m] = compose(half, compose(proj[m], half));
    MeasurementInstrument inst;
    inst.declaration_error = params.eps_RO;
    for (int d = 0; d < 2; ++d) {
        inst.outcome_maps[d] = ChoiMatrix::zero(1);
        inst.outcome_maps[d].matrix =
            (1 - params.eps_RO) * proj[d].matrix + params.eps_RO * proj[1 - d].matrix;
    }
    return inst;
}

// Phase damping from leftover measurement photons over [t1, t2].
inline ChoiMatrix photon_dephasing_channel(double t1, double t2, double t_m, double t_g,
                                           const NoiseParameters& params) {
    if (params.alpha0 == 0.0 || t2 <= t1) return identity_channel(1);
    const double f =
        photon_dephasing_probability(t1, t2, t_m, t_g, params.kappa, params.chi, params.alpha0);
    return dephasing_factor_channel(f);
}

}  // namespace surfsim
