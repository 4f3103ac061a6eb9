#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qrbf/errors.hpp"
#include "qrbf/manifold.hpp"

using namespace qrbf;

namespace {

EmbeddingSet make_set(std::vector<std::array<double, 2>> coords) {
    EmbeddingSet e;
    e.period_id = "TEST";
    for (std::size_t i = 0; i < coords.size(); ++i) e.entity_ids.push_back("E" + std::to_string(i));
    e.coords = std::move(coords);
    return e;
}

EmbeddingSet random_set(std::mt19937_64& rng, std::size_t n, double span) {
    std::vector<std::array<double, 2>> c;
    for (std::size_t i = 0; i < n; ++i)
        c.push_back({testutil::uniform(rng, -span, span), testutil::uniform(rng, -span, span)});
    return make_set(std::move(c));
}

}  // namespace

TEST_CASE("median_pairwise_distance fixtures") {
    // collinear points at 0, 1, 3: distances {1, 2, 3}, median 2
    CHECK(median_pairwise_distance({{0, 0}, {1, 0}, {3, 0}}) == doctest::Approx(2.0).epsilon(1e-15));

    // two points: the single distance
    CHECK(median_pairwise_distance({{0, 0}, {3, 4}}) == doctest::Approx(5.0).epsilon(1e-15));

    // four collinear unit-spaced points: distances {1,1,1,2,2,3}, even count,
    // median = (1+2)/2
    CHECK(median_pairwise_distance({{0, 0}, {1, 0}, {2, 0}, {3, 0}}) ==
          doctest::Approx(1.5).epsilon(1e-15));

    // all coincident -> sigma would be 0
    CHECK_THROWS_AS(median_pairwise_distance({{2, 2}, {2, 2}, {2, 2}, {2, 2}}), NumericalError);
    CHECK_THROWS_AS(median_pairwise_distance({{1, 1}}), DataError);
}

TEST_CASE("two-point kernel equals exp(-1/2)") {
    // sigma = d, so off-diagonal = exp(-d^2 / (2 d^2)) = exp(-1/2)
    const auto K = rbf_kernel(make_set({{0, 0}, {0, 7.3}}), Execution::Serial);
    CHECK(K.n == 2);
    CHECK(K.at(0, 0) == 1.0);
    CHECK(K.at(1, 1) == 1.0);
    CHECK(K.at(0, 1) == doctest::Approx(0.6065306597126334).epsilon(1e-14));
    CHECK(K.at(1, 0) == K.at(0, 1));
    CHECK(K.sigma == doctest::Approx(7.3).epsilon(1e-14));
}

TEST_CASE("three collinear unit-spaced points") {
    // distances {1, 1, 2}, sigma = 1; K(0,1) = exp(-1/2), K(0,2) = exp(-2)
    const auto K = rbf_kernel(make_set({{0, 0}, {1, 0}, {2, 0}}), Execution::Serial);
    CHECK(K.sigma == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(K.at(0, 1) == doctest::Approx(0.6065306597126334).epsilon(1e-14));
    CHECK(K.at(1, 2) == doctest::Approx(0.6065306597126334).epsilon(1e-14));
    CHECK(K.at(0, 2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("sigma=2 fixture: exp(-1/8) and exp(-9/8)") {
    // points at 0, 1, 3 on a line: distances {1, 2, 3}, sigma = 2, so
    // K(0,1) = exp(-1/8), K(1,2) = exp(-1/2), K(0,2) = exp(-9/8)
    const auto K = rbf_kernel(make_set({{0, 0}, {1, 0}, {3, 0}}), Execution::Serial);
    CHECK(K.sigma == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(K.at(0, 1) == doctest::Approx(0.8824969025845955).epsilon(1e-14));
    CHECK(K.at(1, 2) == doctest::Approx(0.6065306597126334).epsilon(1e-14));
    CHECK(K.at(0, 2) == doctest::Approx(0.32465246735834974).epsilon(1e-14));
}

TEST_CASE("kernel invariants on random embeddings") {
    std::mt19937_64 rng(47);
    for (int rep = 0; rep < 10; ++rep) {
        const auto set = random_set(rng, 5 + rng() % 20, 3.0);
        const auto K = rbf_kernel(set, Execution::Serial);
        for (std::size_t i = 0; i < K.n; ++i) {
            CHECK(K.at(i, i) == 1.0);
            for (std::size_t j = 0; j < K.n; ++j) {
                CHECK(K.at(i, j) == K.at(j, i));  // exact symmetry
                CHECK(K.at(i, j) > 0.0);
                CHECK(K.at(i, j) <= 1.0);
            }
        }
        // monotonicity: larger distance, smaller kernel value
        for (int t = 0; t < 20; ++t) {
            const std::size_t a = rng() % K.n, b = rng() % K.n, c = rng() % K.n, d = rng() % K.n;
            const auto dist = [&](std::size_t p, std::size_t q) {
                return std::hypot(set.coords[p][0] - set.coords[q][0],
                                  set.coords[p][1] - set.coords[q][1]);
            };
            if (dist(a, b) < dist(c, d)) CHECK(K.at(a, b) >= K.at(c, d));
        }
    }
}

TEST_CASE("kernel is scale covariant") {
    std::mt19937_64 rng(53);
    const auto set = random_set(rng, 12, 2.0);
    EmbeddingSet scaled = set;
    for (auto& c : scaled.coords) {
        c[0] *= 10.0;
        c[1] *= 10.0;
    }
    const auto K1 = rbf_kernel(set, Execution::Serial);
    const auto K2 = rbf_kernel(scaled, Execution::Serial);
    CHECK(K2.sigma == doctest::Approx(10.0 * K1.sigma).epsilon(1e-12));
    for (std::size_t i = 0; i < K1.entries.size(); ++i)
        CHECK(K2.entries[i] == doctest::Approx(K1.entries[i]).epsilon(1e-12));
}

TEST_CASE("kernel matrix is positive semidefinite") {
    std::mt19937_64 rng(59);
    for (int rep = 0; rep < 5; ++rep) {
        const auto K = rbf_kernel(random_set(rng, 15, 4.0), Execution::Serial);
        Eigen::MatrixXd M(static_cast<Eigen::Index>(K.n), static_cast<Eigen::Index>(K.n));
        for (std::size_t i = 0; i < K.n; ++i)
            for (std::size_t j = 0; j < K.n; ++j)
                M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = K.at(i, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
        CHECK(solver.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("permuting the points permutes the kernel") {
    std::mt19937_64 rng(61);
    const auto set = random_set(rng, 8, 3.0);
    std::vector<std::size_t> perm{3, 0, 7, 5, 1, 6, 2, 4};
    EmbeddingSet shuffled;
    shuffled.period_id = set.period_id;
    for (std::size_t i : perm) {
        shuffled.entity_ids.push_back(set.entity_ids[i]);
        shuffled.coords.push_back(set.coords[i]);
    }
    const auto K = rbf_kernel(set, Execution::Serial);
    const auto Kp = rbf_kernel(shuffled, Execution::Serial);
    CHECK(Kp.sigma == K.sigma);
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = 0; j < perm.size(); ++j)
            CHECK(Kp.at(i, j) == doctest::Approx(K.at(perm[i], perm[j])).epsilon(1e-14));
}

TEST_CASE("parallel kernel matches serial bitwise") {
    std::mt19937_64 rng(67);
    const auto set = random_set(rng, 40, 5.0);
    const auto K1 = rbf_kernel(set, Execution::Serial);
    const auto K2 = rbf_kernel(set, Execution::Parallel);
    CHECK(K1.sigma == K2.sigma);
    CHECK(K1.entries == K2.entries);
}

TEST_CASE("kernel_density is normalized to [0, 1]") {
    std::mt19937_64 rng(71);
    // a tight cluster plus one outlier: the outlier has the lowest density
    auto set = random_set(rng, 10, 0.2);
    set.entity_ids.push_back("OUT");
    set.coords.push_back({50.0, 50.0});
    const auto dens = kernel_density(rbf_kernel(set, Execution::Serial));
    REQUIRE(dens.size() == set.coords.size());
    double max_d = 0.0;
    for (double d : dens) {
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
        max_d = std::max(max_d, d);
    }
    CHECK(max_d == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dens.back() == *std::min_element(dens.begin(), dens.end()));
}

TEST_CASE("embed_all preserves order and matches encode") {
    Seq2SeqModel m = init_model({CellKind::Quantum, 1, 4, 2}, 6, 31);
    std::vector<ReturnSequence> seqs;
    std::mt19937_64 rng(73);
    for (int i = 0; i < 7; ++i) {
        ReturnSequence s{"T" + std::to_string(i), {}};
        for (int t = 0; t < 6; ++t) s.values.push_back(testutil::uniform(rng, -0.04, 0.04));
        seqs.push_back(std::move(s));
    }
    const auto serial = embed_all(m, seqs, "2023Q1", Execution::Serial);
    const auto parallel = embed_all(m, seqs, "2023Q1", Execution::Parallel);
    CHECK(serial.period_id == "2023Q1");
    REQUIRE(serial.size() == seqs.size());
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        CHECK(serial.entity_ids[i] == seqs[i].entity_id);
        const auto z = encode(m, seqs[i]);
        CHECK(serial.coords[i][0] == z[0]);
        CHECK(serial.coords[i][1] == z[1]);
        CHECK(parallel.coords[i] == serial.coords[i]);
    }
}
