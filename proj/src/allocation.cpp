#include "qrbf/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qrbf/errors.hpp"

namespace qrbf {

MomentumSignal momentum_scores(const std::vector<std::string>& entity_ids,
                               const std::vector<std::vector<double>>& training_returns) {
    if (entity_ids.size() != training_returns.size() || entity_ids.empty())
        throw DataError("momentum_scores: empty or misaligned inputs");
    MomentumSignal signal;
    signal.entity_ids = entity_ids;
    signal.scores.resize(entity_ids.size());
    for (std::size_t i = 0; i < training_returns.size(); ++i) {
        const auto& series = training_returns[i];
        if (series.size() < static_cast<std::size_t>(kMomentumWeeks)) {
            throw DataError("momentum_scores: series for '" + entity_ids[i] + "' has " +
                            std::to_string(series.size()) + " weeks, need " +
                            std::to_string(kMomentumWeeks));
        }
        double growth = 1.0;
        for (std::size_t t = series.size() - kMomentumWeeks; t < series.size(); ++t)
            growth *= 1.0 + series[t];
        signal.scores[i] = growth - 1.0;
    }
    return signal;
}

PortfolioWeights divmom_select(const MomentumSignal& m, const KernelMatrix& K,
                               const DivMomConfig& cfg) {
    const std::size_t n = m.scores.size();
    if (n != K.n) throw ConfigError("divmom_select: signal/kernel misaligned");
    if (cfg.k < 1 || static_cast<std::size_t>(cfg.k) > n)
        throw ConfigError("divmom_select: k must lie in 1..N");
    if (cfg.lambda < 0.0) throw ConfigError("divmom_select: lambda must be >= 0");

    std::vector<bool> selected(n, false);
    std::vector<std::size_t> chosen;
    std::vector<double> penalty(n, 0.0);  // sum_{j in S} K_ij
    for (int round = 0; round < cfg.k; ++round) {
        std::size_t best = n;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (selected[i]) continue;
            const double mean_sim = chosen.empty() ? 0.0 : penalty[i] / chosen.size();
            const double score = m.scores[i] - cfg.lambda * mean_sim;
            if (score > best_score) {  // strict: ties keep the lower index
                best_score = score;
                best = i;
            }
        }
        selected[best] = true;
        chosen.push_back(best);
        for (std::size_t i = 0; i < n; ++i) penalty[i] += K.at(i, best);
    }

    PortfolioWeights w;
    w.entity_ids = m.entity_ids;
    w.weights.assign(n, 0.0);
    for (std::size_t i : chosen) w.weights[i] = 1.0 / cfg.k;
    return w;
}

std::vector<double> simplex_project(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n == 0) throw ConfigError("simplex_project: empty vector");
    std::vector<double> sorted(v);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double running = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        running += sorted[j];
        const double candidate = (running - 1.0) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0) theta = candidate;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::max(0.0, v[i] - theta);
    return out;
}

double graph_objective(const std::vector<double>& w, const MomentumSignal& m,
                       const KernelMatrix& K, double gamma) {
    const std::size_t n = w.size();
    // w'Lw = sum_i d_i w_i^2 - w'Kw with d_i = row sums of K
    double quad = 0.0, reward = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row_k = 0.0, kw = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row_k += K.at(i, j);
            kw += K.at(i, j) * w[j];
        }
        quad += row_k * w[i] * w[i] - w[i] * kw;
        reward += m.scores[i] * w[i];
    }
    return quad - gamma * reward;
}

GraphResult graph_allocate(const MomentumSignal& m, const KernelMatrix& K,
                           const GraphConfig& cfg) {
    const std::size_t n = m.scores.size();
    if (n != K.n) throw ConfigError("graph_allocate: signal/kernel misaligned");
    if (!(cfg.gamma > 0.0) || !(cfg.step_size > 0.0) || !(cfg.tolerance > 0.0) ||
        cfg.max_iters < 1)
        throw ConfigError("graph_allocate: invalid config");

    std::vector<double> degree(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) degree[i] += K.at(i, j);

    auto gradient = [&](const std::vector<double>& w, std::vector<double>& g) {
        // grad = 2 L w - gamma m
        for (std::size_t i = 0; i < n; ++i) {
            double kw = 0.0;
            for (std::size_t j = 0; j < n; ++j) kw += K.at(i, j) * w[j];
            g[i] = 2.0 * (degree[i] * w[i] - kw) - cfg.gamma * m.scores[i];
        }
    };

    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<double> g(n);
    double step = cfg.step_size;
    double obj = graph_objective(w, m, K, cfg.gamma);

    GraphResult result;
    result.objective_history.push_back(obj);
    result.converged = false;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        gradient(w, g);
        std::vector<double> candidate;
        double cand_obj = 0.0;
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving) {
            std::vector<double> trial(n);
            for (std::size_t i = 0; i < n; ++i) trial[i] = w[i] - step * g[i];
            trial = simplex_project(trial);
            cand_obj = graph_objective(trial, m, K, cfg.gamma);
            if (cand_obj <= obj) {
                candidate = std::move(trial);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // step underflow; w is a fixed point up to fp noise
        double l1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) l1 += std::abs(candidate[i] - w[i]);
        w = std::move(candidate);
        obj = cand_obj;
        result.objective_history.push_back(obj);
        if (l1 < cfg.tolerance) {
            result.converged = true;
            break;
        }
    }

    result.weights.entity_ids = m.entity_ids;
    result.weights.weights = std::move(w);
    return result;
}

}  // namespace qrbf
