#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "qrbf/allocation.hpp"
#include "qrbf/errors.hpp"

using namespace qrbf;

namespace {

std::vector<std::string> ids(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("E" + std::to_string(i));
    return out;
}

KernelMatrix identity_kernel(std::size_t n) {
    KernelMatrix K;
    K.n = n;
    K.sigma = 1.0;
    K.entries.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) K.entries[i * n + i] = 1.0;
    return K;
}

KernelMatrix random_kernel(std::mt19937_64& rng, std::size_t n) {
    // a valid RBF kernel from random 2-D points
    std::vector<std::array<double, 2>> pts;
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({testutil::uniform(rng, -3, 3), testutil::uniform(rng, -3, 3)});
    EmbeddingSet e;
    e.period_id = "R";
    e.entity_ids = ids(n);
    e.coords = std::move(pts);
    return rbf_kernel(e, Execution::Serial);
}

MomentumSignal random_signal(std::mt19937_64& rng, std::size_t n) {
    MomentumSignal m;
    m.entity_ids = ids(n);
    for (std::size_t i = 0; i < n; ++i) m.scores.push_back(testutil::uniform(rng, -0.2, 0.4));
    return m;
}

}  // namespace

TEST_CASE("momentum_scores fixtures") {
    // 13 weeks of exactly 1%: (1.01)^13 - 1
    const std::vector<std::vector<double>> flat{std::vector<double>(13, 0.01)};
    const auto m = momentum_scores(ids(1), flat);
    CHECK(m.scores[0] == doctest::Approx(0.1380932804332895).epsilon(1e-14));

    // only the trailing 13 weeks count: a horrible first year is ignored
    std::vector<double> series(52, -0.10);
    for (int i = 0; i < 13; ++i) series.push_back(0.01);
    const auto m2 = momentum_scores(ids(1), {series});
    CHECK(m2.scores[0] == doctest::Approx(0.1380932804332895).epsilon(1e-14));

    // fewer than 13 weeks of history is an error
    CHECK_THROWS_AS(momentum_scores(ids(1), {{0.1, -0.1}}), DataError);

    // exactly 13 weeks of zeros -> zero score
    const auto m3 = momentum_scores(ids(1), {std::vector<double>(13, 0.0)});
    CHECK(m3.scores[0] == 0.0);
}

TEST_CASE("divmom with lambda=0 reduces to top-k momentum") {
    std::mt19937_64 rng(83);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 5 + rng() % 30;
        const auto m = random_signal(rng, n);
        const auto K = random_kernel(rng, n);
        DivMomConfig cfg;
        cfg.lambda = 0.0;
        cfg.k = 1 + static_cast<int>(rng() % n);

        const auto w = divmom_select(m, K, cfg);
        REQUIRE(w.weights.size() == n);

        // expected: the k highest scores (ties toward lower index)
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return m.scores[a] > m.scores[b]; });
        std::vector<bool> expected(n, false);
        for (int i = 0; i < cfg.k; ++i) expected[order[static_cast<std::size_t>(i)]] = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (expected[i])
                CHECK(w.weights[i] == doctest::Approx(1.0 / cfg.k).epsilon(1e-15));
            else
                CHECK(w.weights[i] == 0.0);
        }
    }
}

TEST_CASE("divmom with k=N selects everyone uniformly") {
    std::mt19937_64 rng(89);
    const auto m = random_signal(rng, 9);
    const auto K = random_kernel(rng, 9);
    DivMomConfig cfg;
    cfg.lambda = 0.5;
    cfg.k = 9;
    const auto w = divmom_select(m, K, cfg);
    REQUIRE(w.weights.size() == 9);
    for (double x : w.weights) CHECK(x == doctest::Approx(1.0 / 9).epsilon(1e-15));
}

TEST_CASE("divmom penalizes near-duplicates") {
    // entities 0 and 1 are nearly identical with the top two scores; entity 2
    // is dissimilar with a slightly lower score. With enough lambda the
    // second pick must be entity 2.
    MomentumSignal m;
    m.entity_ids = ids(3);
    m.scores = {0.10, 0.099, 0.08};
    KernelMatrix K;
    K.n = 3;
    K.sigma = 1.0;
    K.entries = {1.0, 0.99, 0.05,
                 0.99, 1.0, 0.05,
                 0.05, 0.05, 1.0};
    DivMomConfig cfg;
    cfg.lambda = 0.15;
    cfg.k = 2;
    const auto w = divmom_select(m, K, cfg);
    CHECK(w.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w.weights[1] == 0.0);
    CHECK(w.weights[2] == doctest::Approx(0.5).epsilon(1e-15));

    // with lambda=0 the same instance picks E0 and E1
    cfg.lambda = 0.0;
    const auto w0 = divmom_select(m, K, cfg);
    CHECK(w0.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w0.weights[2] == 0.0);
}

TEST_CASE("divmom ties break toward the lower index") {
    MomentumSignal m;
    m.entity_ids = ids(4);
    m.scores = {0.05, 0.05, 0.05, 0.05};
    const auto w = divmom_select(m, identity_kernel(4), {0.3, 2});
    CHECK(w.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w.weights[2] == 0.0);
    CHECK(w.weights[3] == 0.0);
}

TEST_CASE("divmom selection is invariant to shifting all scores") {
    std::mt19937_64 rng(97);
    const auto K = random_kernel(rng, 12);
    auto m = random_signal(rng, 12);
    const auto w1 = divmom_select(m, K, {0.4, 5});
    for (auto& s : m.scores) s += 10.0;
    const auto w2 = divmom_select(m, K, {0.4, 5});
    CHECK(w1.weights == w2.weights);
}

TEST_CASE("simplex_project fixtures") {
    // already on the simplex: unchanged
    const auto p1 = simplex_project({0.2, 0.3, 0.5});
    CHECK(p1[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(p1[1] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(p1[2] == doctest::Approx(0.5).epsilon(1e-14));

    // symmetric vector projects to uniform
    const auto p2 = simplex_project({5.0, 5.0, 5.0, 5.0});
    for (double x : p2) CHECK(x == doctest::Approx(0.25).epsilon(1e-14));

    // one dominant coordinate saturates
    const auto p3 = simplex_project({10.0, 0.0});
    CHECK(p3[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p3[1] == doctest::Approx(0.0).epsilon(1e-14));

    // known closed form: project (0.5, 0.1) -> shift by (0.6-1)/2 = -0.2
    const auto p4 = simplex_project({0.5, 0.1});
    CHECK(p4[0] == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(p4[1] == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("simplex_project properties on random vectors") {
    std::mt19937_64 rng(101);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng() % 20;
        std::vector<double> v(n);
        for (auto& x : v) x = testutil::uniform(rng, -5, 5);
        const auto p = simplex_project(v);
        double sum = 0.0;
        for (double x : p) {
            CHECK(x >= 0.0);
            sum += x;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

        // projection optimality: p is no farther from v than a random
        // simplex point
        std::vector<double> q(n);
        double qs = 0.0;
        for (auto& x : q) {
            x = testutil::uniform(rng, 0, 1);
            qs += x;
        }
        for (auto& x : q) x /= qs;
        double dp = 0.0, dq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dp += (p[i] - v[i]) * (p[i] - v[i]);
            dq += (q[i] - v[i]) * (q[i] - v[i]);
        }
        CHECK(dp <= dq + 1e-12);
    }
}

TEST_CASE("graph allocator: symmetric instance gives uniform weights") {
    // identical scores and a constant off-diagonal kernel: by symmetry the
    // optimum is uniform
    MomentumSignal m;
    m.entity_ids = ids(4);
    m.scores = {0.1, 0.1, 0.1, 0.1};
    KernelMatrix K = identity_kernel(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) K.entries[i * 4 + j] = 0.5;
    const auto r = graph_allocate(m, K, {});
    for (double w : r.weights.weights) CHECK(w == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("graph allocator: dominant momentum pushes to a vertex") {
    // identity kernel -> L has zero off-diagonals beyond the degree terms;
    // with a large enough gamma the linear term dominates and all weight
    // lands on the top-score entity
    MomentumSignal m;
    m.entity_ids = ids(3);
    m.scores = {0.01, 0.50, 0.02};
    GraphConfig cfg;
    cfg.gamma = 100.0;
    const auto r = graph_allocate(m, identity_kernel(3), cfg);
    CHECK(r.weights.weights[1] > 0.99);
}

TEST_CASE("graph allocator beats a 0.01-grid search on N=3") {
    std::mt19937_64 rng(103);
    for (int rep = 0; rep < 5; ++rep) {
        const auto m = random_signal(rng, 3);
        const auto K = random_kernel(rng, 3);
        GraphConfig cfg;
        const auto r = graph_allocate(m, K, cfg);
        const double got = graph_objective(r.weights.weights, m, K, cfg.gamma);

        double best = 1e18;
        for (int a = 0; a <= 100; ++a) {
            for (int b = 0; b <= 100 - a; ++b) {
                const std::vector<double> w{a / 100.0, b / 100.0, (100 - a - b) / 100.0};
                best = std::min(best, graph_objective(w, m, K, cfg.gamma));
            }
        }
        CHECK(got <= best + 1e-3);
    }
}

TEST_CASE("graph objective history is non-increasing") {
    std::mt19937_64 rng(107);
    const auto m = random_signal(rng, 15);
    const auto K = random_kernel(rng, 15);
    const auto r = graph_allocate(m, K, {});
    REQUIRE(!r.objective_history.empty());
    for (std::size_t i = 1; i < r.objective_history.size(); ++i)
        CHECK(r.objective_history[i] <= r.objective_history[i - 1] + 1e-15);
    CHECK(r.converged);

    double sum = 0.0;
    for (double w : r.weights.weights) {
        CHECK(w >= 0.0);
        sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}
