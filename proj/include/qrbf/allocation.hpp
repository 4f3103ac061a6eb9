#pragma once

#include <string>
#include <vector>

#include "qrbf/manifold.hpp"

namespace qrbf {

struct MomentumSignal {
    std::vector<std::string> entity_ids;
    std::vector<double> scores;  // trailing cumulative simple return
};

struct PortfolioWeights {
    std::vector<std::string> entity_ids;
    std::vector<double> weights;  // nonnegative, sums to 1
};

struct DivMomConfig {
    double lambda = 0.15;  // similarity penalty
    int k = 30;            // portfolio cardinality
};

struct GraphConfig {
    double gamma = 1.0;  // momentum weight
    int max_iters = 5000;
    double step_size = 0.05;
    double tolerance = 1e-8;
};

struct GraphResult {
    PortfolioWeights weights;
    std::vector<double> objective_history;  // non-increasing over accepted iterates
    bool converged = true;
};

constexpr int kMomentumWeeks = 13;

// score_i = prod_t (1 + r_it) - 1 over the trailing 13 weeks of each series.
MomentumSignal momentum_scores(const std::vector<std::string>& entity_ids,
                               const std::vector<std::vector<double>>& training_returns);

// Greedy: seed with argmax m_i, then repeatedly add
// argmax_i [ m_i - lambda * mean_{j in S} K_ij ] until |S| = k; selected
// entities get weight 1/k. Ties break toward the lower entity index.
PortfolioWeights divmom_select(const MomentumSignal& m, const KernelMatrix& K,
                               const DivMomConfig& cfg);

// Minimizes w'Lw - gamma m'w over the probability simplex (L = D - K, the
// kernel-graph Laplacian) by projected gradient descent with step halving.
GraphResult graph_allocate(const MomentumSignal& m, const KernelMatrix& K, const GraphConfig& cfg);

// Euclidean projection onto the probability simplex (sort-based).
std::vector<double> simplex_project(const std::vector<double>& v);

// Objective of the graph allocator, exposed for oracle tests.
double graph_objective(const std::vector<double>& w, const MomentumSignal& m,
                       const KernelMatrix& K, double gamma);

}  // namespace qrbf
