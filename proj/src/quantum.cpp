#include "qrbf/quantum.hpp"

#include <cmath>
#include <string>

#include "qrbf/errors.hpp"

namespace qrbf {

QuantumState init_zero_state(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw ConfigError("num_qubits must be in 1.." + std::to_string(kMaxQubits) +
                          ", got " + std::to_string(num_qubits));
    }
    QuantumState state;
    state.num_qubits = num_qubits;
    state.amplitudes.assign(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
    state.amplitudes[0] = cplx{1.0, 0.0};
    return state;
}

namespace {

void check_qubit(const QuantumState& state, int index, const char* what) {
    if (index < 0 || index >= state.num_qubits) {
        throw ConfigError(std::string(what) + " qubit index " + std::to_string(index) +
                          " out of range for " + std::to_string(state.num_qubits) + " qubits");
    }
}

// Apply a 2x2 unitary [[u00,u01],[u10,u11]] to the target qubit.
void apply_single(QuantumState& state, int target, cplx u00, cplx u01, cplx u10, cplx u11) {
    const std::size_t stride = std::size_t{1} << target;
    const std::size_t dim = state.amplitudes.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + stride;
            const cplx a0 = state.amplitudes[i0];
            const cplx a1 = state.amplitudes[i1];
            state.amplitudes[i0] = u00 * a0 + u01 * a1;
            state.amplitudes[i1] = u10 * a0 + u11 * a1;
        }
    }
}

}  // namespace

void apply_gate(QuantumState& state, const Gate& gate) {
    check_qubit(state, gate.target, "target");
    const double half = gate.angle * 0.5;
    switch (gate.kind) {
        case GateKind::RX: {
            const double c = std::cos(half), s = std::sin(half);
            apply_single(state, gate.target, {c, 0}, {0, -s}, {0, -s}, {c, 0});
            break;
        }
        case GateKind::RY: {
            const double c = std::cos(half), s = std::sin(half);
            apply_single(state, gate.target, {c, 0}, {-s, 0}, {s, 0}, {c, 0});
            break;
        }
        case GateKind::RZ: {
            const cplx e0{std::cos(half), -std::sin(half)};
            const cplx e1{std::cos(half), std::sin(half)};
            apply_single(state, gate.target, e0, {0, 0}, {0, 0}, e1);
            break;
        }
        case GateKind::CNOT: {
            check_qubit(state, gate.control, "control");
            if (gate.control == gate.target) {
                throw ConfigError("CNOT control equals target");
            }
            const std::size_t cmask = std::size_t{1} << gate.control;
            const std::size_t tmask = std::size_t{1} << gate.target;
            const std::size_t dim = state.amplitudes.size();
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & cmask) && !(i & tmask)) {
                    std::swap(state.amplitudes[i], state.amplitudes[i | tmask]);
                }
            }
            break;
        }
    }
}

void apply_circuit(QuantumState& state, const std::vector<Gate>& gates) {
    for (const Gate& g : gates) apply_gate(state, g);
}

Gate inverse(const Gate& gate) {
    Gate inv = gate;
    if (gate.kind != GateKind::CNOT) inv.angle = -gate.angle;
    return inv;
}

std::vector<double> pauli_z_expectations(const QuantumState& state) {
    std::vector<double> expectations(state.num_qubits, 0.0);
    const std::size_t dim = state.amplitudes.size();
    for (std::size_t b = 0; b < dim; ++b) {
        const double p = std::norm(state.amplitudes[b]);
        for (int k = 0; k < state.num_qubits; ++k) {
            expectations[k] += (b >> k) & 1 ? -p : p;
        }
    }
    return expectations;
}

double norm_squared(const QuantumState& state) {
    double total = 0.0;
    for (const cplx& a : state.amplitudes) total += std::norm(a);
    return total;
}

}  // namespace qrbf
