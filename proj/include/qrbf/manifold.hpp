#pragma once

#include <array>
#include <string>
#include <vector>

#include "qrbf/recurrent.hpp"

namespace qrbf {

struct EmbeddingSet {
    std::string period_id;
    std::vector<std::string> entity_ids;
    std::vector<std::array<double, 2>> coords;

    std::size_t size() const { return coords.size(); }
};

struct KernelMatrix {
    std::size_t n = 0;
    std::vector<double> entries;  // n x n row-major; symmetric, unit diagonal
    double sigma = 0.0;

    double at(std::size_t m, std::size_t k) const { return entries[m * n + k]; }
};

// Row m = encode(sequence_m) with the frozen model; input order preserved.
EmbeddingSet embed_all(const Seq2SeqModel& model, const std::vector<ReturnSequence>& sequences,
                       const std::string& period_id, Execution exec = Execution::Parallel);

// Median of the N(N-1)/2 off-diagonal Euclidean distances (even count: mean
// of the two middle values). All-coincident points give sigma = 0, reported
// as a NumericalError.
double median_pairwise_distance(const std::vector<std::array<double, 2>>& coords);

// K_mn = exp(-|h_m - h_n|^2 / (2 sigma^2)), diagonal forced to exactly 1.
KernelMatrix rbf_kernel(const EmbeddingSet& embeddings, Execution exec = Execution::Parallel);

// Row-sum of K minus 1, normalized to [0, 1] by the max (Fig.-1-style
// kernel density per point).
std::vector<double> kernel_density(const KernelMatrix& kernel);

}  // namespace qrbf
