// Serial vs OpenMP timing for the three hot paths: batch training gradients,
// embedding extraction, and the RBF kernel.
#include <chrono>
#include <cstdio>
#include <vector>

#include "qrbf/data.hpp"
#include "qrbf/manifold.hpp"
#include "qrbf/recurrent.hpp"

using namespace qrbf;
using clock_type = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(F&& fn, int reps) {
    const auto t0 = clock_type::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-24s serial %9.2f ms   parallel %9.2f ms   speedup %.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
    SyntheticConfig scfg;
    scfg.num_weeks = 52;
    const auto table = generate_synthetic_universe(scfg).first;
    const auto sequences =
        build_sequences(table, table.dates.front(), table.dates.back());
    std::printf("universe: %zu entities x %zu weeks\n\n", table.num_entities(), table.num_weeks());

    Seq2SeqModel model = init_model({CellKind::Quantum, 1, 8, 4},
                                    static_cast<int>(table.num_weeks()), 42);
    std::vector<std::vector<std::uint8_t>> flags;
    for (std::size_t i = 0; i < sequences.size(); ++i)
        flags.push_back(teacher_forcing_flags(42, 0, i, model.seq_len, 0.5));

    std::vector<double> grad;
    report("batch_loss_and_grad",
           time_ms([&] { batch_loss_and_grad(model, sequences, flags, grad, Execution::Serial); },
                   3),
           time_ms([&] { batch_loss_and_grad(model, sequences, flags, grad, Execution::Parallel); },
                   3));

    EmbeddingSet set;
    report("embed_all",
           time_ms([&] { set = embed_all(model, sequences, "BENCH", Execution::Serial); }, 5),
           time_ms([&] { set = embed_all(model, sequences, "BENCH", Execution::Parallel); }, 5));

    // pad the embedding set so the kernel has some work to do
    EmbeddingSet big = set;
    for (int rep = 0; rep < 25; ++rep) {
        for (std::size_t i = 0; i < set.size(); ++i) {
            big.entity_ids.push_back(set.entity_ids[i] + "_" + std::to_string(rep));
            big.coords.push_back({set.coords[i][0] + 1e-3 * rep, set.coords[i][1] - 1e-3 * rep});
        }
    }
    KernelMatrix K;
    report("rbf_kernel",
           time_ms([&] { K = rbf_kernel(big, Execution::Serial); }, 5),
           time_ms([&] { K = rbf_kernel(big, Execution::Parallel); }, 5));
    return 0;
}
