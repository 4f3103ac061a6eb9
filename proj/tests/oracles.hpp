// Test-only oracles, independent of the library's gate application path.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "qrbf/quantum.hpp"

namespace testutil {

using qrbf::cplx;
using Matrix = std::vector<std::vector<cplx>>;

// Full 2^q x 2^q unitary for one gate, built entry by entry from the 2x2
// (or controlled 4x4) definition.
inline Matrix gate_matrix(const qrbf::Gate& g, int num_qubits) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    Matrix M(dim, std::vector<cplx>(dim, cplx{0, 0}));
    if (g.kind == qrbf::GateKind::CNOT) {
        for (std::size_t j = 0; j < dim; ++j) {
            std::size_t i = j;
            if ((j >> g.control) & 1) i = j ^ (std::size_t{1} << g.target);
            M[i][j] = cplx{1, 0};
        }
        return M;
    }
    const double half = g.angle * 0.5;
    cplx u[2][2];
    switch (g.kind) {
        case qrbf::GateKind::RX:
            u[0][0] = {std::cos(half), 0};
            u[0][1] = {0, -std::sin(half)};
            u[1][0] = {0, -std::sin(half)};
            u[1][1] = {std::cos(half), 0};
            break;
        case qrbf::GateKind::RY:
            u[0][0] = {std::cos(half), 0};
            u[0][1] = {-std::sin(half), 0};
            u[1][0] = {std::sin(half), 0};
            u[1][1] = {std::cos(half), 0};
            break;
        default:  // RZ
            u[0][0] = {std::cos(half), -std::sin(half)};
            u[0][1] = {0, 0};
            u[1][0] = {0, 0};
            u[1][1] = {std::cos(half), std::sin(half)};
            break;
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if ((i ^ j) & ~(std::size_t{1} << g.target)) continue;  // other bits must match
            M[i][j] = u[(i >> g.target) & 1][(j >> g.target) & 1];
        }
    }
    return M;
}

inline std::vector<cplx> matvec(const Matrix& M, const std::vector<cplx>& x) {
    std::vector<cplx> y(M.size(), cplx{0, 0});
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = 0; j < M.size(); ++j) y[i] += M[i][j] * x[j];
    return y;
}

// Naive composed-matrix simulation of a whole circuit from |0...0>.
inline std::vector<cplx> oracle_statevector(const std::vector<qrbf::Gate>& gates, int num_qubits) {
    std::vector<cplx> state(std::size_t{1} << num_qubits, cplx{0, 0});
    state[0] = cplx{1, 0};
    for (const auto& g : gates) state = matvec(gate_matrix(g, num_qubits), state);
    return state;
}

inline std::vector<double> oracle_z_expectations(const std::vector<cplx>& state, int num_qubits) {
    std::vector<double> z(num_qubits, 0.0);
    for (std::size_t b = 0; b < state.size(); ++b) {
        const double p = std::norm(state[b]);
        for (int k = 0; k < num_qubits; ++k) z[static_cast<std::size_t>(k)] += ((b >> k) & 1) ? -p : p;
    }
    return z;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::vector<qrbf::Gate> random_circuit(std::mt19937_64& rng, int num_qubits, int length) {
    std::vector<qrbf::Gate> gates;
    for (int i = 0; i < length; ++i) {
        const int kind = static_cast<int>(rng() % (num_qubits > 1 ? 4 : 3));
        const int target = static_cast<int>(rng() % static_cast<std::uint64_t>(num_qubits));
        if (kind == 3) {
            int control = target;
            while (control == target)
                control = static_cast<int>(rng() % static_cast<std::uint64_t>(num_qubits));
            gates.push_back(qrbf::cnot(control, target));
        } else {
            const double angle = uniform(rng, -M_PI, M_PI);
            gates.push_back({static_cast<qrbf::GateKind>(kind), target, -1, angle});
        }
    }
    return gates;
}

}  // namespace testutil
