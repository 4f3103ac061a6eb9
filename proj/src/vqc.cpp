#include "qrbf/vqc.hpp"

#include <cmath>
#include <string>

#include "qrbf/errors.hpp"

namespace qrbf {

namespace {

void check_shapes(const std::vector<double>& input, const VqcParams& params) {
    const auto q = static_cast<std::size_t>(params.num_qubits);
    if (input.size() != q || params.angles.size() != 2 * q) {
        throw ConfigError("vqc shape mismatch: q=" + std::to_string(params.num_qubits) +
                          ", input=" + std::to_string(input.size()) +
                          ", angles=" + std::to_string(params.angles.size()));
    }
}

std::vector<double> encoding_angles(const std::vector<double>& input) {
    std::vector<double> enc(input.size());
    for (std::size_t k = 0; k < input.size(); ++k) enc[k] = 2.0 * std::atan(input[k]);
    return enc;
}

std::vector<Gate> circuit_from_angles(const std::vector<double>& enc, const VqcParams& params) {
    const int q = params.num_qubits;
    std::vector<Gate> gates;
    gates.reserve(static_cast<std::size_t>(4 * q));
    for (int k = 0; k < q; ++k) gates.push_back(ry(k, enc[static_cast<std::size_t>(k)]));
    for (int k = 0; k < q; ++k) gates.push_back(ry(k, params.angles[static_cast<std::size_t>(2 * k)]));
    for (int k = 0; k < q; ++k) gates.push_back(rz(k, params.angles[static_cast<std::size_t>(2 * k + 1)]));
    if (q > 1) {
        for (int k = 0; k < q; ++k) gates.push_back(cnot(k, (k + 1) % q));
    }
    return gates;
}

std::vector<double> forward_from_angles(const std::vector<double>& enc, const VqcParams& params) {
    QuantumState state = init_zero_state(params.num_qubits);
    apply_circuit(state, circuit_from_angles(enc, params));
    return pauli_z_expectations(state);
}

double weighted_readout(const std::vector<double>& z, const std::vector<double>& upstream) {
    double total = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) total += upstream[k] * z[k];
    return total;
}

// Applies -i P / 2 for the generator P of a rotation gate.
void apply_generator(QuantumState& state, const Gate& gate) {
    const std::size_t stride = std::size_t{1} << gate.target;
    const std::size_t dim = state.amplitudes.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + stride;
            const cplx a0 = state.amplitudes[i0];
            const cplx a1 = state.amplitudes[i1];
            switch (gate.kind) {
                case GateKind::RX:
                    state.amplitudes[i0] = cplx{0.0, -0.5} * a1;
                    state.amplitudes[i1] = cplx{0.0, -0.5} * a0;
                    break;
                case GateKind::RY:
                    state.amplitudes[i0] = -0.5 * a1;
                    state.amplitudes[i1] = 0.5 * a0;
                    break;
                case GateKind::RZ:
                    state.amplitudes[i0] = cplx{0.0, -0.5} * a0;
                    state.amplitudes[i1] = cplx{0.0, 0.5} * a1;
                    break;
                case GateKind::CNOT:
                    break;  // unparameterized
            }
        }
    }
}

double re_inner(const QuantumState& bra, const QuantumState& ket) {
    double total = 0.0;
    for (std::size_t b = 0; b < bra.amplitudes.size(); ++b) {
        total += (std::conj(bra.amplitudes[b]) * ket.amplitudes[b]).real();
    }
    return total;
}

}  // namespace

std::vector<Gate> build_vqc_circuit(const std::vector<double>& input, const VqcParams& params) {
    check_shapes(input, params);
    return circuit_from_angles(encoding_angles(input), params);
}

std::vector<double> vqc_forward(const std::vector<double>& input, const VqcParams& params) {
    check_shapes(input, params);
    return forward_from_angles(encoding_angles(input), params);
}

VqcGradient vqc_backward(const std::vector<double>& input, const VqcParams& params,
                         const std::vector<double>& upstream) {
    check_shapes(input, params);
    const int q = params.num_qubits;
    const std::vector<double> enc = encoding_angles(input);
    const std::vector<Gate> gates = circuit_from_angles(enc, params);

    QuantumState ket = init_zero_state(q);
    apply_circuit(ket, gates);

    // bra = O |psi>, O = sum_k upstream_k Z_k (diagonal).
    QuantumState bra = ket;
    const std::size_t dim = bra.amplitudes.size();
    for (std::size_t b = 0; b < dim; ++b) {
        double w = 0.0;
        for (int k = 0; k < q; ++k) {
            w += (b >> k) & 1 ? -upstream[static_cast<std::size_t>(k)]
                              : upstream[static_cast<std::size_t>(k)];
        }
        bra.amplitudes[b] *= w;
    }

    std::vector<double> angle_grads(gates.size(), 0.0);
    for (std::size_t j = gates.size(); j-- > 0;) {
        const Gate& g = gates[j];
        apply_gate(ket, inverse(g));  // ket is now the pre-gate state
        if (g.kind != GateKind::CNOT) {
            QuantumState deriv = ket;
            apply_generator(deriv, g);
            apply_gate(deriv, g);
            angle_grads[j] = 2.0 * re_inner(bra, deriv);
        }
        apply_gate(bra, inverse(g));
    }

    VqcGradient grad;
    grad.d_angles.assign(2 * static_cast<std::size_t>(q), 0.0);
    grad.d_input.assign(static_cast<std::size_t>(q), 0.0);
    for (int k = 0; k < q; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const double x = input[uk];
        grad.d_input[uk] = angle_grads[uk] * 2.0 / (1.0 + x * x);
        grad.d_angles[2 * uk] = angle_grads[static_cast<std::size_t>(q) + uk];
        grad.d_angles[2 * uk + 1] = angle_grads[2 * static_cast<std::size_t>(q) + uk];
    }
    return grad;
}

VqcGradient parameter_shift_gradient(const std::vector<double>& input, const VqcParams& params,
                                     const std::vector<double>& upstream) {
    check_shapes(input, params);
    const int q = params.num_qubits;
    const std::vector<double> enc = encoding_angles(input);
    constexpr double kShift = M_PI / 2.0;

    VqcGradient grad;
    grad.d_angles.assign(params.angles.size(), 0.0);
    grad.d_input.assign(input.size(), 0.0);

    for (std::size_t p = 0; p < params.angles.size(); ++p) {
        VqcParams shifted = params;
        shifted.angles[p] += kShift;
        const double plus = weighted_readout(forward_from_angles(enc, shifted), upstream);
        shifted.angles[p] -= 2.0 * kShift;
        const double minus = weighted_readout(forward_from_angles(enc, shifted), upstream);
        grad.d_angles[p] = 0.5 * (plus - minus);
    }
    for (std::size_t k = 0; k < input.size(); ++k) {
        std::vector<double> enc_shifted = enc;
        enc_shifted[k] += kShift;
        const double plus = weighted_readout(forward_from_angles(enc_shifted, params), upstream);
        enc_shifted[k] -= 2.0 * kShift;
        const double minus = weighted_readout(forward_from_angles(enc_shifted, params), upstream);
        const double x = input[k];
        grad.d_input[k] = 0.5 * (plus - minus) * 2.0 / (1.0 + x * x);
    }
    return grad;
}

}  // namespace qrbf
