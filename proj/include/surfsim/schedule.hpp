#pragma once

// Time-stamped syndrome-extraction circuits for surface-17: per-round
// scheduling, crosstalk CPHASE insertion, CZ compensation, CPHASE moving,
// and the full memory experiment (k noisy rounds + 1 noiseless round +
// pure-error corrections).

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "surfsim/layout.hpp"
#include "surfsim/noise.hpp"

namespace surfsim {

enum class OpKind { RY_PLUS, RY_MINUS, CZ, CPHASE, MEASURE, CORRECT, PHOTON_DEPHASE, RESET };

struct ScheduledOp {
    OpKind kind;
    std::vector<int> qubits;  // global qubit indices
    double start = 0;
    double duration = 0;
    double theta = 0;       // CPHASE angle
    int bit = -1;           // MEASURE: declared syndrome bit id; CORRECT: control bit id
    char pauli = 'X';       // CORRECT
    bool noisy = true;      // final-round ops are noiseless
    bool exposed = false;   // MEASURE: bit is decoder-visible (open in the network)
    bool xtalk = false;     // CPHASE inserted as crosstalk (target of compensation/moving)
    double t_m = 0;         // PHOTON_DEPHASE: start of the originating measurement

    double midpoint() const { return start + duration / 2; }
};

struct CzRegion {
    double begin = 0;
    double end = 0;
    bool noisy = true;
};

struct CircuitSchedule {
    int num_qubits = 0;
    std::vector<ScheduledOp> ops;
    std::vector<CzRegion> cz_regions;
    std::vector<double> round_boundaries;
    std::vector<int> undamped_qubits;  // e.g. the virtual reference qubit
    double total_duration = 0;
    double noisy_end = 0;  // damping stops here (start of the noiseless round)

    void sort_ops() {
        std::stable_sort(ops.begin(), ops.end(), [](const ScheduledOp& a, const ScheduledOp& b) {
            return a.midpoint() < b.midpoint();
        });
    }

    // One op per line: time, kind, qubits, params. Debug/export format.
    std::string dump() const {
        static const char* names[] = {"RY+",     "RY-",     "CZ",     "CPHASE",
                                      "MEASURE", "CORRECT", "PHOTON", "RESET"};
        std::ostringstream os;
        for (const auto& op : ops) {
            os << op.start << " " << names[static_cast<int>(op.kind)];
            for (int q : op.qubits) os << " q" << q;
            if (op.kind == OpKind::CPHASE) os << " theta=" << op.theta;
            if (op.kind == OpKind::MEASURE) os << " bit=" << op.bit << (op.exposed ? " open" : "");
            if (op.kind == OpKind::CORRECT) os << " pauli=" << op.pauli << " bit=" << op.bit;
            if (!op.noisy) os << " noiseless";
            os << "\n";
        }
        return os.str();
    }
};

struct CrosstalkSpec {
    double kt_region = 0.0;  // dimensionless k*t; inserted CPHASE = exp(-4i*kt |11><11|)
    std::vector<std::pair<QubitId, QubitId>> pairs;  // defaults to all layout edges
    bool compensated = false;
    // Insert crosstalk only in regions where the pair hosts a two-qubit
    // gate (with compensation this cancels the crosstalk exactly).
    bool gated_only = false;
    // Optional custom placement: fraction in [0,1] of the CZ-region for one
    // specific pair; all other pairs stay at the region end.
    std::optional<std::pair<QubitId, QubitId>> moved_pair;
    double moved_fraction = 0.0;
};

namespace detail {

// CZ dance order: which data neighbor each ancilla touches in layer l.
// X-ancillas: NW, NE, SW, SE; Z-ancillas: NW, SW, NE, SE.
inline std::optional<QubitId> dance_partner(const Surface17& s, const QubitId& anc, int layer) {
    const bool x_type = anc.role == QubitRole::X_ANCILLA;
    static const int order_x[4][2] = {{-1, 1}, {1, 1}, {-1, -1}, {1, -1}};
    static const int order_z[4][2] = {{-1, 1}, {-1, -1}, {1, 1}, {1, -1}};
    const int* d = x_type ? order_x[layer] : order_z[layer];
    QubitId q{anc.x + d[0], anc.y + d[1], QubitRole::DATA};
    for (const auto& dq : s.data)
        if (dq == q) return q;
    return std::nullopt;
}

}  // namespace detail

struct RoundOptions {
    bool noisy = true;
    bool exposed = true;  // measurement bits decoder-visible
    int round_index = 0;  // bit ids are round_index*8 + stabilizer position
};

// Append one syndrome-extraction round (X-half then Z-half) starting at t0.
// Returns the end time.
inline double append_round(CircuitSchedule& sched, const Surface17& s, const NoiseParameters& p,
                           double t0, const RoundOptions& ro) {
    const double g1 = p.T_g1Q, g2 = p.T_g2Q;
    auto add = [&](ScheduledOp op) {
        op.noisy = ro.noisy;
        sched.ops.push_back(op);
    };
    double t = t0;
    for (int half = 0; half < 2; ++half) {
        const bool x_half = (half == 0);
        const auto& ancillas = x_half ? s.x_ancillas : s.z_ancillas;
        // Opening rotations: ancillas RY+, data rotated into the X basis
        // during the X half only.
        for (const auto& a : ancillas)
            add({OpKind::RY_PLUS, {s.qubit_index(a)}, t, g1});
        if (x_half)
            for (const auto& d : s.data) add({OpKind::RY_MINUS, {s.qubit_index(d)}, t, g1});
        // Four CZ layers.
        const double region_begin = t + g1;
        for (int layer = 0; layer < 4; ++layer) {
            const double lt = region_begin + layer * g2;
            for (const auto& a : ancillas) {
                auto d = detail::dance_partner(s, a, layer);
                if (d) add({OpKind::CZ, {s.qubit_index(a), s.qubit_index(*d)}, lt, g2});
            }
        }
        const double region_end = region_begin + 4 * g2;
        sched.cz_regions.push_back({region_begin, region_end, ro.noisy});
        // Closing rotations.
        for (const auto& a : ancillas)
            add({OpKind::RY_MINUS, {s.qubit_index(a)}, region_end, g1});
        if (x_half)
            for (const auto& d : s.data) add({OpKind::RY_PLUS, {s.qubit_index(d)}, region_end, g1});
        // Measurement + depletion. Stabilizer bit position follows the
        // stabilizer listing (X ancillas 0..3, Z ancillas 4..7).
        const double t_meas = region_end + g1;
        for (size_t i = 0; i < ancillas.size(); ++i) {
            ScheduledOp m{OpKind::MEASURE, {s.qubit_index(ancillas[i])}, t_meas, p.tau_m};
            m.bit = ro.round_index * 8 + (x_half ? 0 : 4) + static_cast<int>(i);
            m.exposed = ro.exposed;
            add(m);
            // Residual-photon dephasing over the next coherent step.
            if (ro.noisy && p.alpha0 != 0.0) {
                const double dep_end = t_meas + p.tau_m + p.tau_d;
                ScheduledOp ph{OpKind::PHOTON_DEPHASE, {s.qubit_index(ancillas[i])}, dep_end, p.tau_c};
                ph.t_m = t_meas;
                add(ph);
            }
        }
        t = t_meas + p.tau_m + p.tau_d;
    }
    sched.round_boundaries.push_back(t);
    return t;
}

// Append one pipelined syndrome-extraction round starting at t0: the
// X-ancilla measurement/depletion runs concurrently with the Z-half dance,
// so consecutive rounds repeat every tau_c + tau_m + tau_d. Returns the
// start of the next round; the round's own Z measurement and depletion
// extend tau_c beyond it (on Z ancillas only, which are free again exactly
// when the next Z-half begins).
inline double append_round_pipelined(CircuitSchedule& sched, const Surface17& s,
                                     const NoiseParameters& p, double t0,
                                     const RoundOptions& ro) {
    const double g1 = p.T_g1Q, g2 = p.T_g2Q;
    if (2 * g1 + 4 * g2 > p.tau_c + 1e-9)
        throw std::invalid_argument(
            "append_round_pipelined: the coherent step (2*T_g1Q + 4*T_g2Q) does not fit tau_c");
    auto add = [&](ScheduledOp op) {
        op.noisy = ro.noisy;
        sched.ops.push_back(op);
    };
    for (int half = 0; half < 2; ++half) {
        const bool x_half = (half == 0);
        const auto& ancillas = x_half ? s.x_ancillas : s.z_ancillas;
        const double t = t0 + (x_half ? 0.0 : p.tau_c);
        for (const auto& a : ancillas)
            add({OpKind::RY_PLUS, {s.qubit_index(a)}, t, g1});
        if (x_half)
            for (const auto& d : s.data) add({OpKind::RY_MINUS, {s.qubit_index(d)}, t, g1});
        const double region_begin = t + g1;
        for (int layer = 0; layer < 4; ++layer) {
            const double lt = region_begin + layer * g2;
            for (const auto& a : ancillas) {
                auto d = detail::dance_partner(s, a, layer);
                if (d) add({OpKind::CZ, {s.qubit_index(a), s.qubit_index(*d)}, lt, g2});
            }
        }
        const double region_end = region_begin + 4 * g2;
        sched.cz_regions.push_back({region_begin, region_end, ro.noisy});
        for (const auto& a : ancillas)
            add({OpKind::RY_MINUS, {s.qubit_index(a)}, region_end, g1});
        if (x_half)
            for (const auto& d : s.data) add({OpKind::RY_PLUS, {s.qubit_index(d)}, region_end, g1});
        // Measurement starts when the coherent-step slot closes.
        const double t_meas = t + p.tau_c;
        for (size_t i = 0; i < ancillas.size(); ++i) {
            ScheduledOp m{OpKind::MEASURE, {s.qubit_index(ancillas[i])}, t_meas, p.tau_m};
            m.bit = ro.round_index * 8 + (x_half ? 0 : 4) + static_cast<int>(i);
            m.exposed = ro.exposed;
            add(m);
            if (ro.noisy && p.alpha0 != 0.0) {
                const double dep_end = t_meas + p.tau_m + p.tau_d;
                ScheduledOp ph{OpKind::PHOTON_DEPHASE, {s.qubit_index(ancillas[i])}, dep_end, p.tau_c};
                ph.t_m = t_meas;
                add(ph);
            }
        }
    }
    const double next = t0 + p.tau_c + p.tau_m + p.tau_d;
    sched.round_boundaries.push_back(next);
    return next;
}

inline CircuitSchedule syndrome_round_schedule(const NoiseParameters& p) {
    const Surface17 s = surface17_layout();
    CircuitSchedule sched;
    sched.num_qubits = 17;
    sched.total_duration = append_round(sched, s, p, 0.0, RoundOptions{});
    sched.noisy_end = sched.total_duration;
    sched.sort_ops();
    return sched;
}

// One CPHASE(-4*kt) per pair per noisy CZ-region, at the region end unless
// the pair is the spec's moved pair.
inline CircuitSchedule insert_crosstalk(const CircuitSchedule& schedule, const Surface17& s,
                                        const CrosstalkSpec& spec) {
    if (spec.kt_region == 0.0) return schedule;
    CircuitSchedule out = schedule;
    auto pairs = spec.pairs;
    if (pairs.empty()) pairs = s.edges;
    for (const auto& pr : pairs)
        if (!s.is_edge(pr.first, pr.second))
            throw std::invalid_argument("insert_crosstalk: pair " + pr.first.str() + "-" +
                                        pr.second.str() + " is not a layout edge");
    auto hosts_gate = [&](const CzRegion& region, int q0, int q1) {
        for (const auto& op : out.ops) {
            if (op.qubits.size() != 2 || op.xtalk ||
                (op.kind != OpKind::CZ && op.kind != OpKind::CPHASE))
                continue;
            if (op.midpoint() < region.begin - 1e-9 || op.midpoint() > region.end + 1e-9) continue;
            if ((op.qubits[0] == q0 && op.qubits[1] == q1) ||
                (op.qubits[0] == q1 && op.qubits[1] == q0))
                return true;
        }
        return false;
    };
    for (const auto& region : out.cz_regions) {
        if (!region.noisy) continue;
        for (const auto& pr : pairs) {
            if (spec.gated_only &&
                !hosts_gate(region, s.qubit_index(pr.first), s.qubit_index(pr.second)))
                continue;
            double at = region.end;
            if (spec.moved_pair &&
                ((pr.first == spec.moved_pair->first && pr.second == spec.moved_pair->second) ||
                 (pr.first == spec.moved_pair->second && pr.second == spec.moved_pair->first)))
                at = region.begin + spec.moved_fraction * (region.end - region.begin);
            ScheduledOp op{OpKind::CPHASE, {s.qubit_index(pr.first), s.qubit_index(pr.second)},
                           at, 0.0};
            op.theta = -4 * spec.kt_region;
            op.xtalk = true;
            out.ops.push_back(op);
        }
    }
    out.sort_ops();
    return out;
}

// Compensation: every CZ whose pair carries a crosstalk CPHASE inside the
// same region is retuned to CPHASE(pi + 4*kt) so that gate and crosstalk
// (angle -4*kt) multiply back to an exact CZ. Crosstalk on pairs without a
// CZ in the region remains uncompensated.
inline CircuitSchedule compensate_cz(const CircuitSchedule& schedule, const CrosstalkSpec& spec) {
    if (spec.kt_region == 0.0) return schedule;
    CircuitSchedule out = schedule;
    for (const auto& op : out.ops) {
        if (!(op.kind == OpKind::CPHASE && op.xtalk)) continue;
        // Find the hosting region and a CZ on the same pair inside it.
        for (const auto& region : out.cz_regions) {
            if (op.midpoint() < region.begin - 1e-9 || op.midpoint() > region.end + 1e-9) continue;
            for (auto& other : out.ops) {
                const bool same_pair =
                    other.qubits.size() == 2 && op.qubits.size() == 2 &&
                    ((other.qubits[0] == op.qubits[0] && other.qubits[1] == op.qubits[1]) ||
                     (other.qubits[0] == op.qubits[1] && other.qubits[1] == op.qubits[0]));
                const bool in_region =
                    other.midpoint() >= region.begin - 1e-9 && other.midpoint() <= region.end + 1e-9;
                if (same_pair && in_region && (other.kind == OpKind::CZ ||
                                               (other.kind == OpKind::CPHASE && !other.xtalk))) {
                    const double base = other.kind == OpKind::CZ ? kPi : other.theta;
                    other.kind = OpKind::CPHASE;
                    other.theta = base - op.theta;
                    break;
                }
            }
            break;
        }
    }
    out.sort_ops();
    return out;
}

// Relocate a crosstalk CPHASE on `pair` from from_time to to_time; both
// must lie in the same CZ-region.
inline CircuitSchedule move_cphase(const CircuitSchedule& schedule, const Surface17& s,
                                   const std::pair<QubitId, QubitId>& pair, double from_time,
                                   double to_time) {
    CircuitSchedule out = schedule;
    const int q0 = s.qubit_index(pair.first), q1 = s.qubit_index(pair.second);
    bool in_same_region = false;
    for (const auto& region : out.cz_regions)
        if (from_time >= region.begin - 1e-9 && from_time <= region.end + 1e-9 &&
            to_time >= region.begin - 1e-9 && to_time <= region.end + 1e-9)
            in_same_region = true;
    if (!in_same_region)
        throw std::invalid_argument("move_cphase: times not inside one CZ-region");
    for (auto& op : out.ops) {
        if (op.kind == OpKind::CPHASE && op.xtalk && std::abs(op.midpoint() - from_time) < 1e-9 &&
            ((op.qubits[0] == q0 && op.qubits[1] == q1) ||
             (op.qubits[0] == q1 && op.qubits[1] == q0))) {
            op.start = to_time;
            out.sort_ops();
            return out;
        }
    }
    throw std::invalid_argument("move_cphase: no crosstalk CPHASE on that pair at from_time");
}

struct MemoryExperimentCircuit {
    CircuitSchedule circuit;
    std::vector<int> open_bits;  // decoder-visible declared syndrome bits
    int rounds = 0;
};

struct MemoryExperimentOptions {
    // Expose the final noiseless round's outcomes to the decoder: k+1
    // rounds contribute 8*(k+1) decoder-visible bits. Required for correct
    // optimal decoding — an error detected only by the final round leaves a
    // logical residual that depends on those outcomes, so summing them out
    // makes the per-syndrome conditional a mixture no single logical
    // correction can fix (a first-order logical leak).
    bool expose_final_round = true;
    // Pipeline each round: ancilla measurement/depletion overlaps the other
    // half's dance, repeating every tau_c + tau_m + tau_d (the published
    // tables assume this timing; sequential halves roughly double the data
    // idle time per round and with it the logical error rates).
    bool pipelined = true;
};

// k noisy rounds + one noiseless round + noiseless pure-error corrections
// conditioned on the final-round outcomes.
inline MemoryExperimentCircuit memory_experiment_circuit(int rounds, const NoiseParameters& p,
                                                         const CrosstalkSpec& xtalk,
                                                         const MemoryExperimentOptions& opts = {}) {
    if (rounds < 1) throw std::invalid_argument("memory_experiment_circuit: rounds must be >= 1");
    const Surface17 s = surface17_layout();
    MemoryExperimentCircuit mec;
    mec.rounds = rounds;
    CircuitSchedule& sched = mec.circuit;
    sched.num_qubits = 18;  // 17 physical + 1 virtual reference qubit
    sched.undamped_qubits = {17};
    double t = 0;
    for (int r = 0; r < rounds; ++r)
        t = opts.pipelined ? append_round_pipelined(sched, s, p, t, RoundOptions{true, true, r})
                           : append_round(sched, s, p, t, RoundOptions{true, true, r});
    // In the pipelined layout the last round's Z measurement and depletion
    // run tau_c past the nominal round boundary; every noisy op (and the
    // damping it implies) must precede noisy_end.
    if (opts.pipelined) t += p.tau_c;
    sched.noisy_end = t;
    // The final round is a decoding device reading the true stabilizer
    // eigenvalues; without a reset its raw outcomes would be XORed with the
    // previous round's (ancillas are not re-prepared between rounds), and
    // the pure-error corrections below would fire on stale outcomes.
    for (int q = 9; q < 17; ++q) {
        ScheduledOp rs{OpKind::RESET, {q}, t, 0.0};
        rs.noisy = false;
        sched.ops.push_back(rs);
    }
    t = append_round(sched, s, p, t, RoundOptions{false, opts.expose_final_round, rounds});
    // Trivial decoder: pure error applied iff the final-round outcome is -1.
    for (size_t i = 0; i < s.stabilizers.size(); ++i) {
        const auto& st = s.stabilizers[i];
        ScheduledOp c{OpKind::CORRECT, {s.qubit_index(st.pure_error_qubit)}, t, 0.0};
        c.bit = rounds * 8 + static_cast<int>(i);
        c.pauli = st.pure_error_pauli;
        c.noisy = false;
        sched.ops.push_back(c);
    }
    sched.total_duration = t;
    sched.sort_ops();
    if (xtalk.kt_region != 0.0) {
        sched = insert_crosstalk(sched, s, xtalk);
        if (xtalk.compensated) sched = compensate_cz(sched, xtalk);
        mec.circuit = sched;
    }
    const int exposed_rounds = opts.expose_final_round ? rounds + 1 : rounds;
    for (int b = 0; b < exposed_rounds * 8; ++b) mec.open_bits.push_back(b);
    return mec;
}

}  // namespace surfsim
