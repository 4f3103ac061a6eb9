#include "qrbf/manifold.hpp"

#include <algorithm>
#include <cmath>

#include "qrbf/errors.hpp"

namespace qrbf {

EmbeddingSet embed_all(const Seq2SeqModel& model, const std::vector<ReturnSequence>& sequences,
                       const std::string& period_id, Execution exec) {
    if (sequences.empty()) throw DataError("embed_all: empty sequence list");
    EmbeddingSet set;
    set.period_id = period_id;
    set.entity_ids.resize(sequences.size());
    set.coords.resize(sequences.size());
    const bool parallel = exec == Execution::Parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(sequences.size()); ++i) {
        const auto ui = static_cast<std::size_t>(i);
        set.entity_ids[ui] = sequences[ui].entity_id;
        const std::vector<double> latent = encode(model, sequences[ui]);
        set.coords[ui] = {latent[0], latent[1]};
    }
    return set;
}

namespace {

double dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

double median_pairwise_distance(const std::vector<std::array<double, 2>>& coords) {
    const std::size_t n = coords.size();
    if (n < 2) throw DataError("median_pairwise_distance needs at least 2 points");
    std::vector<double> dists;
    dists.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dists.push_back(dist(coords[i], coords[j]));
    std::sort(dists.begin(), dists.end());
    const std::size_t m = dists.size();
    const double median = m % 2 == 1 ? dists[m / 2] : 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
    if (median <= 0.0) {
        throw NumericalError("degenerate latent geometry: median pairwise distance is zero "
                             "(collapsed embedding)");
    }
    return median;
}

KernelMatrix rbf_kernel(const EmbeddingSet& embeddings, Execution exec) {
    const std::size_t n = embeddings.size();
    if (n < 2) throw DataError("rbf_kernel needs at least 2 embeddings");
    KernelMatrix K;
    K.n = n;
    K.sigma = median_pairwise_distance(embeddings.coords);
    K.entries.assign(n * n, 1.0);
    const double inv = 1.0 / (2.0 * K.sigma * K.sigma);
    const bool parallel = exec == Execution::Parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const auto ui = static_cast<std::size_t>(i);
        for (std::size_t j = ui + 1; j < n; ++j) {
            const double d = dist(embeddings.coords[ui], embeddings.coords[j]);
            const double v = std::exp(-d * d * inv);
            K.entries[ui * n + j] = v;  // mirrored below; computed once
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) K.entries[j * n + i] = K.entries[i * n + j];
    return K;
}

std::vector<double> kernel_density(const KernelMatrix& kernel) {
    std::vector<double> density(kernel.n, 0.0);
    for (std::size_t i = 0; i < kernel.n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < kernel.n; ++j) row += kernel.at(i, j);
        density[i] = row - 1.0;
    }
    const double top = *std::max_element(density.begin(), density.end());
    if (top > 0.0) {
        for (double& d : density) d /= top;
    }
    return density;
}

}  // namespace qrbf
