#pragma once

#include <vector>

#include "qrbf/quantum.hpp"

namespace qrbf {

// Depth-1 variational circuit: per qubit k an RY(2*atan(x_k)) encoding on
// |0...0>, one variational layer RY(theta[k][0]) RZ(theta[k][1]), a CNOT ring
// k -> (k+1) mod q (skipped for q = 1), then <Z> readout per qubit.
struct VqcParams {
    int num_qubits = 0;
    std::vector<double> angles;  // q x 2 row-major: [k][0] = RY, [k][1] = RZ

    static VqcParams zeros(int num_qubits) {
        return {num_qubits, std::vector<double>(2 * static_cast<std::size_t>(num_qubits), 0.0)};
    }
};

struct VqcGradient {
    std::vector<double> d_angles;  // q x 2, same layout as VqcParams::angles
    std::vector<double> d_input;   // length q
};

std::vector<Gate> build_vqc_circuit(const std::vector<double>& input, const VqcParams& params);

// <Z> per qubit; every entry lies in [-1, 1].
std::vector<double> vqc_forward(const std::vector<double>& input, const VqcParams& params);

// Exact gradients of upstream . <Z> via an adjoint-style reverse pass over
// the statevector; chains through the atan encoding for d_input.
VqcGradient vqc_backward(const std::vector<double>& input, const VqcParams& params,
                         const std::vector<double>& upstream);

// Independent oracle: (f(theta + pi/2) - f(theta - pi/2)) / 2 per rotation
// parameter, exact for this gate set.
VqcGradient parameter_shift_gradient(const std::vector<double>& input, const VqcParams& params,
                                     const std::vector<double>& upstream);

}  // namespace qrbf
