#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qrbf/errors.hpp"
#include "qrbf/quantum.hpp"

using namespace qrbf;

TEST_CASE("init_zero_state") {
    auto s1 = init_zero_state(1);
    CHECK(s1.amplitudes.size() == 2);
    CHECK(s1.amplitudes[0] == cplx{1, 0});
    CHECK(s1.amplitudes[1] == cplx{0, 0});

    auto s2 = init_zero_state(2);
    CHECK(s2.amplitudes.size() == 4);
    CHECK(s2.amplitudes[0] == cplx{1, 0});

    CHECK_THROWS_AS(init_zero_state(0), ConfigError);
    CHECK_THROWS_AS(init_zero_state(9), ConfigError);
}

TEST_CASE("RY(pi) flips |0> to |1>") {
    auto s = init_zero_state(1);
    apply_gate(s, ry(0, M_PI));
    CHECK(std::norm(s.amplitudes[0]) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::norm(s.amplitudes[1]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("CNOT truth table (little-endian)") {
    // |10> here means qubit 0 = 1, qubit 1 = 0, i.e. basis index 1
    auto s = init_zero_state(2);
    s.amplitudes[0] = {0, 0};
    s.amplitudes[1] = {1, 0};
    apply_gate(s, cnot(0, 1));
    CHECK(s.amplitudes[3] == cplx{1, 0});
    CHECK(s.amplitudes[1] == cplx{0, 0});
}

TEST_CASE("RZ leaves probabilities unchanged") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10; ++i) {
        auto s = init_zero_state(1);
        apply_gate(s, ry(0, testutil::uniform(rng, -M_PI, M_PI)));
        const double p0 = std::norm(s.amplitudes[0]);
        apply_gate(s, rz(0, testutil::uniform(rng, -M_PI, M_PI)));
        CHECK(std::norm(s.amplitudes[0]) == doctest::Approx(p0).epsilon(1e-14));
    }
}

TEST_CASE("pauli_z_expectations basics") {
    auto s = init_zero_state(1);
    CHECK(pauli_z_expectations(s)[0] == doctest::Approx(1.0));

    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        const double theta = testutil::uniform(rng, -M_PI, M_PI);
        auto t = init_zero_state(1);
        apply_gate(t, ry(0, theta));
        CHECK(std::abs(pauli_z_expectations(t)[0] - std::cos(theta)) < 1e-12);
    }
}

TEST_CASE("Bell state has zero <Z> on both qubits") {
    auto s = init_zero_state(2);
    apply_gate(s, ry(0, M_PI / 2));
    apply_gate(s, cnot(0, 1));
    const auto z = pauli_z_expectations(s);
    CHECK(std::abs(z[0]) < 1e-12);
    CHECK(std::abs(z[1]) < 1e-12);
}

TEST_CASE("norm preserved over random gate sequences") {
    std::mt19937_64 rng(13);
    for (int q = 1; q <= 4; ++q) {
        for (int rep = 0; rep < 5; ++rep) {
            auto s = init_zero_state(q);
            for (const auto& g : testutil::random_circuit(rng, q, 50)) {
                apply_gate(s, g);
                CHECK(std::abs(norm_squared(s) - 1.0) < 1e-12);
            }
        }
    }
}

TEST_CASE("RY(theta) then RY(-theta) is the identity") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        auto s = init_zero_state(3);
        apply_circuit(s, testutil::random_circuit(rng, 3, 10));
        const auto before = s.amplitudes;
        const double theta = testutil::uniform(rng, -M_PI, M_PI);
        apply_gate(s, ry(1, theta));
        apply_gate(s, ry(1, -theta));
        for (std::size_t i = 0; i < before.size(); ++i)
            CHECK(std::abs(s.amplitudes[i] - before[i]) < 1e-12);
    }
}

TEST_CASE("statevector matches naive matrix-product oracle") {
    std::mt19937_64 rng(19);
    for (int rep = 0; rep < 50; ++rep) {
        const int q = 1 + static_cast<int>(rng() % 3);
        const auto gates = testutil::random_circuit(rng, q, 20);
        auto s = init_zero_state(q);
        apply_circuit(s, gates);
        const auto expected = testutil::oracle_statevector(gates, q);
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(std::abs(s.amplitudes[i] - expected[i]) < 1e-10);
    }
}

TEST_CASE("invalid gate indices are rejected") {
    auto s = init_zero_state(2);
    CHECK_THROWS_AS(apply_gate(s, ry(2, 0.1)), ConfigError);
    CHECK_THROWS_AS(apply_gate(s, cnot(0, 0)), ConfigError);
    CHECK_THROWS_AS(apply_gate(s, cnot(3, 1)), ConfigError);
}
