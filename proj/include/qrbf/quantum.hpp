#pragma once

#include <complex>
#include <vector>

namespace qrbf {

using cplx = std::complex<double>;

// Dense statevector over a small register. Qubit 0 is the least-significant
// bit of the basis index (little-endian).
struct QuantumState {
    int num_qubits = 0;
    std::vector<cplx> amplitudes;
};

enum class GateKind { RX, RY, RZ, CNOT };

struct Gate {
    GateKind kind;
    int target = 0;
    int control = -1;    // CNOT only
    double angle = 0.0;  // rotations only
};

inline Gate rx(int target, double angle) { return {GateKind::RX, target, -1, angle}; }
inline Gate ry(int target, double angle) { return {GateKind::RY, target, -1, angle}; }
inline Gate rz(int target, double angle) { return {GateKind::RZ, target, -1, angle}; }
inline Gate cnot(int control, int target) { return {GateKind::CNOT, target, control, 0.0}; }

constexpr int kMaxQubits = 8;

// |0...0> on q qubits; throws ConfigError for q outside 1..8.
QuantumState init_zero_state(int num_qubits);

// In-place stride application of one gate.
void apply_gate(QuantumState& state, const Gate& gate);

void apply_circuit(QuantumState& state, const std::vector<Gate>& gates);

// Inverse gate (rotation with negated angle; CNOT is self-inverse).
Gate inverse(const Gate& gate);

// <Z_k> per qubit, entries in [-1, 1].
std::vector<double> pauli_z_expectations(const QuantumState& state);

double norm_squared(const QuantumState& state);

}  // namespace qrbf
