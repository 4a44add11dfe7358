#pragma once

// Lowering from a time-stamped CircuitSchedule to a flat event stream the
// tensor-network builder and the dense oracle both consume. Every op acts
// instantaneously at a point of its interval; amplitude/phase damping tiles
// each qubit's remaining time exactly (no gaps, no overlaps), clipped at
// the start of the noiseless tail.

#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "surfsim/noise.hpp"
#include "surfsim/schedule.hpp"

namespace surfsim {

enum class EventKind { CHANNEL, DIAGONAL, MEASURE, CONTROLLED_PAULI };

struct Event {
    EventKind kind = EventKind::CHANNEL;
    std::vector<int> qubits;

    ChoiMatrix choi;  // CHANNEL

    std::vector<std::complex<double>> diagonal;  // DIAGONAL: 2^|qubits| phases

    MeasurementInstrument instrument;  // MEASURE (single qubit)
    int bit = -1;
    bool exposed = false;

    int control_bit = -1;  // CONTROLLED_PAULI: applied iff the declared bit is 1
    char pauli = 'X';
};

namespace detail {

// True when the channel commutes with every Z-axis rotation (idle damping,
// dephasing and axis-symmetric depolarizing all qualify; RY rotations do
// not). Such channels may be reordered freely with diagonal gates.
inline bool z_rotation_covariant(const ChoiMatrix& c, double tol = 1e-12) {
    if (c.num_qubits != 1) return false;
    const double phi = 0.7321;  // generic angle
    ComplexMatrix rz = ComplexMatrix::Zero(2, 2);
    rz(0, 0) = std::exp(std::complex<double>(0, -phi / 2));
    rz(1, 1) = std::exp(std::complex<double>(0, phi / 2));
    ChoiMatrix zc = choi_from_kraus(KrausSet{1, {rz}});
    ComplexMatrix a = compose(c, zc).matrix, b = compose(zc, c).matrix;
    return (a - b).cwiseAbs().maxCoeff() < tol;
}

}  // namespace detail

// Translate the schedule into time-ordered events. Damping between op
// points is emitted as explicit idle CHANNEL events; time at or beyond
// schedule.noisy_end contributes no damping.
inline std::vector<Event> lower_schedule(const CircuitSchedule& schedule,
                                         const NoiseParameters& params) {
    std::vector<Event> events;
    std::vector<double> cursor(schedule.num_qubits, 0.0);
    std::vector<char> damped(schedule.num_qubits, 1);
    for (int q : schedule.undamped_qubits) damped[q] = 0;
    const double cap = schedule.noisy_end;
    auto clip = [&](double t) { return std::min(t, cap); };
    auto idle_to = [&](int q, double t) {
        const double d = damped[q] ? clip(t) - clip(cursor[q]) : 0.0;
        if (d > 1e-12) {
            Event e;
            e.kind = EventKind::CHANNEL;
            e.qubits = {q};
            e.choi = idle_channel(d, params.T1, params.T_phi);
            events.push_back(std::move(e));
        }
        cursor[q] = std::max(cursor[q], t);
    };

    for (const auto& op : schedule.ops) {
        switch (op.kind) {
            case OpKind::RY_PLUS:
            case OpKind::RY_MINUS: {
                for (int q : op.qubits) idle_to(q, op.start);
                Event e;
                e.kind = EventKind::CHANNEL;
                e.qubits = op.qubits;
                const GateKind gk = op.kind == OpKind::RY_PLUS ? GateKind::RY_PLUS : GateKind::RY_MINUS;
                e.choi = op.noisy ? noisy_gate(gk, op.duration, params) : gate_channel(gk);
                events.push_back(std::move(e));
                for (int q : op.qubits) cursor[q] = op.start + op.duration;
                break;
            }
            case OpKind::CZ:
            case OpKind::CPHASE: {
                // Diagonal gates attach at the interval midpoint; damping
                // halves around them come from the regular tiling.
                for (int q : op.qubits) idle_to(q, op.midpoint());
                Event e;
                e.kind = EventKind::DIAGONAL;
                e.qubits = op.qubits;
                const double theta = op.kind == OpKind::CZ ? kPi : op.theta;
                e.diagonal = {1.0, 1.0, 1.0, std::exp(std::complex<double>(0, theta))};
                events.push_back(std::move(e));
                break;
            }
            case OpKind::MEASURE: {
                // Projector at the halfway point; the damping dressing is
                // emitted as ordinary idle channels so it fuses with the
                // neighbors.
                for (int q : op.qubits) idle_to(q, op.midpoint());
                Event e;
                e.kind = EventKind::MEASURE;
                e.qubits = op.qubits;
                NoiseParameters bare = op.noisy ? params : noiseless_parameters();
                bare.tau_m = 0;
                e.instrument = measurement_instrument(bare);
                e.bit = op.bit;
                e.exposed = op.exposed;
                events.push_back(std::move(e));
                break;
            }
            case OpKind::CORRECT: {
                for (int q : op.qubits) idle_to(q, op.start);
                Event e;
                e.kind = EventKind::CONTROLLED_PAULI;
                e.qubits = op.qubits;
                e.control_bit = op.bit;
                e.pauli = op.pauli;
                events.push_back(std::move(e));
                break;
            }
            case OpKind::RESET: {
                for (int q : op.qubits) idle_to(q, op.start);
                Event e;
                e.kind = EventKind::CHANNEL;
                e.qubits = op.qubits;
                e.choi = reset_channel();
                events.push_back(std::move(e));
                break;
            }
            case OpKind::PHOTON_DEPHASE: {
                // Extra dephasing from leftover measurement photons on top
                // of regular idling; commutes with damping, applied at the
                // interval start without advancing the damping cursor.
                if (!op.noisy || params.alpha0 == 0.0) break;
                Event e;
                e.kind = EventKind::CHANNEL;
                e.qubits = op.qubits;
                e.choi = photon_dephasing_channel(op.start, op.start + op.duration, op.t_m,
                                                  params.tau_m, params);
                events.push_back(std::move(e));
                break;
            }
        }
    }
    // Trailing damping up to the end of the noisy window.
    for (int q = 0; q < schedule.num_qubits; ++q) idle_to(q, schedule.total_duration);
    return events;
}

// Fuse the event stream: consecutive single-qubit channels on a qubit are
// composed into one; diagonal gates slide ahead of pending channels that
// commute with Z rotations (pure damping), which keeps CZ/CPHASE attachable
// to a single network wire segment. Semantics are preserved exactly.
inline std::vector<Event> fuse_events(const std::vector<Event>& events, int num_qubits) {
    std::vector<Event> out;
    std::vector<ChoiMatrix> pending(num_qubits);
    std::vector<char> has_pending(num_qubits, 0), pending_zcov(num_qubits, 1);

    auto flush = [&](int q) {
        if (!has_pending[q]) return;
        Event e;
        e.kind = EventKind::CHANNEL;
        e.qubits = {q};
        e.choi = pending[q];
        out.push_back(std::move(e));
        has_pending[q] = 0;
        pending_zcov[q] = 1;
    };

    for (const auto& ev : events) {
        switch (ev.kind) {
            case EventKind::CHANNEL:
                if (ev.qubits.size() == 1) {
                    const int q = ev.qubits[0];
                    if (has_pending[q]) {
                        pending[q] = compose(ev.choi, pending[q]);
                        pending_zcov[q] = pending_zcov[q] && detail::z_rotation_covariant(ev.choi);
                    } else {
                        pending[q] = ev.choi;
                        has_pending[q] = 1;
                        pending_zcov[q] = detail::z_rotation_covariant(ev.choi);
                    }
                } else {
                    for (int q : ev.qubits) flush(q);
                    out.push_back(ev);
                }
                break;
            case EventKind::DIAGONAL: {
                bool slides = true;
                for (int q : ev.qubits)
                    if (has_pending[q] && !pending_zcov[q]) slides = false;
                if (!slides)
                    for (int q : ev.qubits) flush(q);
                out.push_back(ev);
                break;
            }
            case EventKind::MEASURE:
            case EventKind::CONTROLLED_PAULI:
                for (int q : ev.qubits) flush(q);
                out.push_back(ev);
                break;
        }
    }
    for (int q = 0; q < num_qubits; ++q) flush(q);
    return out;
}

}  // namespace surfsim
