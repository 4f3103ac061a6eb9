#include "qrbf/recurrent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qrbf/errors.hpp"

namespace qrbf {

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        throw ConfigError("learning_rate must be a finite nonnegative real");
    if (epochs < 1) throw ConfigError("epochs must be positive");
    if (!(teacher_forcing_prob >= 0.0 && teacher_forcing_prob <= 1.0))
        throw ConfigError("teacher_forcing_prob must lie in [0,1]");
    if (hidden_width < 1) throw ConfigError("hidden_width must be positive");
    if (qubits < 1 || qubits > kMaxQubits)
        throw ConfigError("qubits must be in 1.." + std::to_string(kMaxQubits));
}

ModelLayout::ModelLayout(const ModelDims& d) : dims(d) {
    const std::size_t din = static_cast<std::size_t>(d.d_in);
    const std::size_t H = static_cast<std::size_t>(d.hidden);
    const std::size_t q = static_cast<std::size_t>(d.qubits);
    if (d.kind == CellKind::Quantum) {
        gate_size = q * (din + H) + H * q + H + 2 * q;
    } else {
        gate_size = H * (din + H) + H;
    }
    cell_size = kNumGates * gate_size;
    latent_proj_off = 2 * cell_size;
    latent_expand_off = latent_proj_off + kLatentDim * H;
    output_head_off = latent_expand_off + H * kLatentDim;
    total = output_head_off + din * H;
}

std::size_t ModelLayout::compression_off(int cell, int gate) const { return gate_off(cell, gate); }

std::size_t ModelLayout::readout_off(int cell, int gate) const {
    const std::size_t q = static_cast<std::size_t>(dims.qubits);
    return gate_off(cell, gate) + q * static_cast<std::size_t>(dims.d_in + dims.hidden);
}

std::size_t ModelLayout::bias_off(int cell, int gate) const {
    const std::size_t H = static_cast<std::size_t>(dims.hidden);
    const std::size_t q = static_cast<std::size_t>(dims.qubits);
    if (dims.kind == CellKind::Quantum) {
        return readout_off(cell, gate) + H * q;
    }
    return dense_off(cell, gate) + H * static_cast<std::size_t>(dims.d_in + dims.hidden);
}

std::size_t ModelLayout::angles_off(int cell, int gate) const {
    return bias_off(cell, gate) + static_cast<std::size_t>(dims.hidden);
}

std::size_t ModelLayout::dense_off(int cell, int gate) const { return gate_off(cell, gate); }

namespace {

double unit_uniform(std::mt19937_64& rng) {
    // 53-bit mantissa draw in [0,1); stable across standard libraries.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix64(seed ^ mix64(a ^ mix64(b)));
}

void matvec(const double* A, int rows, int cols, const double* x, double* y) {
    for (int r = 0; r < rows; ++r) {
        double acc = 0.0;
        const double* row = A + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void matTvec_acc(const double* A, int rows, int cols, const double* y, double* x) {
    for (int r = 0; r < rows; ++r) {
        const double* row = A + static_cast<std::size_t>(r) * cols;
        const double yr = y[r];
        for (int c = 0; c < cols; ++c) x[c] += row[c] * yr;
    }
}

void outer_acc(double* dA, int rows, int cols, const double* u, const double* v) {
    for (int r = 0; r < rows; ++r) {
        double* row = dA + static_cast<std::size_t>(r) * cols;
        const double ur = u[r];
        for (int c = 0; c < cols; ++c) row[c] += ur * v[c];
    }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct StepCache {
    std::vector<double> v;  // [x; h_prev]
    std::vector<double> c_prev;
    std::array<std::vector<double>, kNumGates> z;  // quantum: compressed input, length q
    std::array<std::vector<double>, kNumGates> e;  // quantum: vqc readout, length q
    std::array<std::vector<double>, kNumGates> a;  // gate pre-activation, length H
    std::vector<double> ig, fg, og, cand, c, tc, h;
};

// Forward pass of one cell step; the sigmoid/tanh gate combination below is
// shared between the quantum and classical paths.
void forward_step(const Seq2SeqModel& model, const ModelLayout& lay, int cell,
                  const std::vector<double>& x, const std::vector<double>& h_prev,
                  const std::vector<double>& c_prev, StepCache& cache) {
    const int din = lay.dims.d_in;
    const int H = lay.dims.hidden;
    const int q = lay.dims.qubits;
    if (static_cast<int>(x.size()) != din || static_cast<int>(h_prev.size()) != H ||
        static_cast<int>(c_prev.size()) != H) {
        throw ConfigError("cell step shape mismatch");
    }
    cache.v.resize(static_cast<std::size_t>(din + H));
    std::copy(x.begin(), x.end(), cache.v.begin());
    std::copy(h_prev.begin(), h_prev.end(), cache.v.begin() + din);
    cache.c_prev = c_prev;

    const double* P = model.params.data();
    for (int g = 0; g < kNumGates; ++g) {
        cache.a[g].assign(static_cast<std::size_t>(H), 0.0);
        if (lay.dims.kind == CellKind::Quantum) {
            cache.z[g].assign(static_cast<std::size_t>(q), 0.0);
            matvec(P + lay.compression_off(cell, g), q, din + H, cache.v.data(), cache.z[g].data());
            VqcParams vp{q, std::vector<double>(P + lay.angles_off(cell, g),
                                                P + lay.angles_off(cell, g) + 2 * q)};
            cache.e[g] = vqc_forward(cache.z[g], vp);
            matvec(P + lay.readout_off(cell, g), H, q, cache.e[g].data(), cache.a[g].data());
        } else {
            matvec(P + lay.dense_off(cell, g), H, din + H, cache.v.data(), cache.a[g].data());
        }
        const double* bias = P + lay.bias_off(cell, g);
        for (int r = 0; r < H; ++r) cache.a[g][static_cast<std::size_t>(r)] += bias[r];
    }

    cache.ig.resize(static_cast<std::size_t>(H));
    cache.fg.resize(static_cast<std::size_t>(H));
    cache.og.resize(static_cast<std::size_t>(H));
    cache.cand.resize(static_cast<std::size_t>(H));
    cache.c.resize(static_cast<std::size_t>(H));
    cache.tc.resize(static_cast<std::size_t>(H));
    cache.h.resize(static_cast<std::size_t>(H));
    for (int r = 0; r < H; ++r) {
        const auto u = static_cast<std::size_t>(r);
        cache.ig[u] = sigmoid(cache.a[0][u]);
        cache.fg[u] = sigmoid(cache.a[1][u]);
        cache.og[u] = sigmoid(cache.a[2][u]);
        cache.cand[u] = std::tanh(cache.a[3][u]);
        cache.c[u] = cache.fg[u] * c_prev[u] + cache.ig[u] * cache.cand[u];
        cache.tc[u] = std::tanh(cache.c[u]);
        cache.h[u] = cache.og[u] * cache.tc[u];
    }
}

// Reverse pass of one cell step. dh/dc are the incoming adjoints of h_t and
// c_t; outputs the adjoints of x, h_prev, c_prev and accumulates parameter
// gradients into grad.
void backward_step(const Seq2SeqModel& model, const ModelLayout& lay, int cell,
                   const StepCache& cache, const std::vector<double>& dh,
                   const std::vector<double>& dc_in, std::vector<double>& grad,
                   std::vector<double>& dx, std::vector<double>& dh_prev,
                   std::vector<double>& dc_prev) {
    const int din = lay.dims.d_in;
    const int H = lay.dims.hidden;
    const int q = lay.dims.qubits;
    const double* P = model.params.data();
    double* G = grad.data();

    std::array<std::vector<double>, kNumGates> da;
    for (auto& v : da) v.assign(static_cast<std::size_t>(H), 0.0);
    dc_prev.assign(static_cast<std::size_t>(H), 0.0);
    for (int r = 0; r < H; ++r) {
        const auto u = static_cast<std::size_t>(r);
        const double d_o = dh[u] * cache.tc[u];
        const double dct = dc_in[u] + dh[u] * cache.og[u] * (1.0 - cache.tc[u] * cache.tc[u]);
        const double d_i = dct * cache.cand[u];
        const double d_f = dct * cache.c_prev[u];
        const double d_cand = dct * cache.ig[u];
        dc_prev[u] = dct * cache.fg[u];
        da[0][u] = d_i * cache.ig[u] * (1.0 - cache.ig[u]);
        da[1][u] = d_f * cache.fg[u] * (1.0 - cache.fg[u]);
        da[2][u] = d_o * cache.og[u] * (1.0 - cache.og[u]);
        da[3][u] = d_cand * (1.0 - cache.cand[u] * cache.cand[u]);
    }

    std::vector<double> dv(static_cast<std::size_t>(din + H), 0.0);
    for (int g = 0; g < kNumGates; ++g) {
        double* db = G + lay.bias_off(cell, g);
        for (int r = 0; r < H; ++r) db[r] += da[g][static_cast<std::size_t>(r)];
        if (lay.dims.kind == CellKind::Quantum) {
            outer_acc(G + lay.readout_off(cell, g), H, q, da[g].data(), cache.e[g].data());
            std::vector<double> de(static_cast<std::size_t>(q), 0.0);
            matTvec_acc(P + lay.readout_off(cell, g), H, q, da[g].data(), de.data());
            VqcParams vp{q, std::vector<double>(P + lay.angles_off(cell, g),
                                                P + lay.angles_off(cell, g) + 2 * q)};
            VqcGradient vg = vqc_backward(cache.z[g], vp, de);
            double* dang = G + lay.angles_off(cell, g);
            for (int p = 0; p < 2 * q; ++p) dang[p] += vg.d_angles[static_cast<std::size_t>(p)];
            outer_acc(G + lay.compression_off(cell, g), q, din + H, vg.d_input.data(),
                      cache.v.data());
            matTvec_acc(P + lay.compression_off(cell, g), q, din + H, vg.d_input.data(), dv.data());
        } else {
            outer_acc(G + lay.dense_off(cell, g), H, din + H, da[g].data(), cache.v.data());
            matTvec_acc(P + lay.dense_off(cell, g), H, din + H, da[g].data(), dv.data());
        }
    }
    dx.assign(dv.begin(), dv.begin() + din);
    dh_prev.assign(dv.begin() + din, dv.end());
}

}  // namespace

Seq2SeqModel init_model(const ModelDims& dims, int seq_len, std::uint64_t seed) {
    if (dims.d_in < 1 || dims.hidden < 1) throw ConfigError("invalid model dims");
    if (dims.kind == CellKind::Quantum && (dims.qubits < 1 || dims.qubits > kMaxQubits))
        throw ConfigError("qubits out of range");
    Seq2SeqModel model;
    model.dims = dims;
    model.seq_len = seq_len;
    const ModelLayout lay(dims);
    model.params.assign(lay.total, 0.0);
    std::mt19937_64 rng(derive_seed(seed, 0x6d6f64656cULL, 0));

    auto fill_uniform = [&](std::size_t off, std::size_t n, double half_range) {
        for (std::size_t i = 0; i < n; ++i)
            model.params[off + i] = (2.0 * unit_uniform(rng) - 1.0) * half_range;
    };
    const std::size_t din = static_cast<std::size_t>(dims.d_in);
    const std::size_t H = static_cast<std::size_t>(dims.hidden);
    const std::size_t q = static_cast<std::size_t>(dims.qubits);
    constexpr double kWeightRange = 0.1;
    const double kAngleRange = M_PI / 8.0;
    for (int cell = 0; cell < 2; ++cell) {
        for (int g = 0; g < kNumGates; ++g) {
            if (dims.kind == CellKind::Quantum) {
                fill_uniform(lay.compression_off(cell, g), q * (din + H), kWeightRange);
                fill_uniform(lay.readout_off(cell, g), H * q, kWeightRange);
                fill_uniform(lay.angles_off(cell, g), 2 * q, kAngleRange);
            } else {
                fill_uniform(lay.dense_off(cell, g), H * (din + H), kWeightRange);
            }
            // biases start at zero
        }
    }
    fill_uniform(lay.latent_proj_off, kLatentDim * H, kWeightRange);
    fill_uniform(lay.latent_expand_off, H * kLatentDim, kWeightRange);
    fill_uniform(lay.output_head_off, din * H, kWeightRange);
    return model;
}

CellStepResult qlstm_cell_step(const std::vector<double>& x, const std::vector<double>& h_prev,
                               const std::vector<double>& c_prev, const Seq2SeqModel& model,
                               int cell_index) {
    if (model.dims.kind != CellKind::Quantum) throw ConfigError("model is not quantum");
    StepCache cache;
    forward_step(model, model.layout(), cell_index, x, h_prev, c_prev, cache);
    return {cache.h, cache.c};
}

CellStepResult lstm_cell_step(const std::vector<double>& x, const std::vector<double>& h_prev,
                              const std::vector<double>& c_prev, const Seq2SeqModel& model,
                              int cell_index) {
    if (model.dims.kind != CellKind::Classical) throw ConfigError("model is not classical");
    StepCache cache;
    forward_step(model, model.layout(), cell_index, x, h_prev, c_prev, cache);
    return {cache.h, cache.c};
}

std::vector<double> encode(const Seq2SeqModel& model, const ReturnSequence& seq) {
    if (static_cast<int>(seq.values.size()) != model.seq_len) {
        throw DataError("sequence '" + seq.entity_id + "' has length " +
                        std::to_string(seq.values.size()) + ", model expects " +
                        std::to_string(model.seq_len));
    }
    const ModelLayout lay = model.layout();
    const int H = lay.dims.hidden;
    std::vector<double> h(static_cast<std::size_t>(H), 0.0);
    std::vector<double> c(static_cast<std::size_t>(H), 0.0);
    StepCache cache;
    for (double value : seq.values) {
        forward_step(model, lay, 0, {value}, h, c, cache);
        h = cache.h;
        c = cache.c;
    }
    std::vector<double> latent(kLatentDim, 0.0);
    matvec(model.params.data() + lay.latent_proj_off, kLatentDim, H, h.data(), latent.data());
    return latent;
}

std::vector<double> decode(const Seq2SeqModel& model, const std::vector<double>& latent,
                           const ReturnSequence& target, double p_tf, std::uint64_t rng_seed) {
    if (!(p_tf >= 0.0 && p_tf <= 1.0)) throw ConfigError("p_tf must lie in [0,1]");
    const ModelLayout lay = model.layout();
    const int H = lay.dims.hidden;
    const std::size_t L = target.values.size();
    std::mt19937_64 rng(derive_seed(rng_seed, 0x6465636f6465ULL, 0));

    std::vector<double> h(static_cast<std::size_t>(H), 0.0);
    matvec(model.params.data() + lay.latent_expand_off, H, kLatentDim, latent.data(), h.data());
    std::vector<double> c(static_cast<std::size_t>(H), 0.0);
    std::vector<double> preds(L, 0.0);
    StepCache cache;
    for (std::size_t j = 0; j < L; ++j) {
        double u = 0.0;
        if (j > 0) {
            const bool forced = unit_uniform(rng) < p_tf;
            u = forced ? target.values[j - 1] : preds[j - 1];
        }
        forward_step(model, lay, 1, {u}, h, c, cache);
        h = cache.h;
        c = cache.c;
        double pred = 0.0;
        matvec(model.params.data() + lay.output_head_off, 1, H, h.data(), &pred);
        preds[j] = pred;
    }
    return preds;
}

double mse_loss(const std::vector<double>& target, const std::vector<double>& prediction) {
    if (target.size() != prediction.size() || target.empty())
        throw DataError("mse_loss length mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double d = target[i] - prediction[i];
        total += d * d;
    }
    return total / static_cast<double>(target.size());
}

std::vector<std::uint8_t> teacher_forcing_flags(std::uint64_t seed, int epoch, std::size_t seq_index,
                                                int seq_len, double p_tf) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(epoch) + 1, seq_index + 1));
    std::vector<std::uint8_t> flags(static_cast<std::size_t>(seq_len), 0);
    for (int j = 1; j < seq_len; ++j)
        flags[static_cast<std::size_t>(j)] = unit_uniform(rng) < p_tf ? 1 : 0;
    return flags;
}

double sequence_loss_and_grad(const Seq2SeqModel& model, const ReturnSequence& seq,
                              const std::vector<std::uint8_t>& tf_flags, double scale,
                              std::vector<double>& grad) {
    const ModelLayout lay = model.layout();
    const int H = lay.dims.hidden;
    const int L = static_cast<int>(seq.values.size());
    if (static_cast<int>(tf_flags.size()) != L) throw ConfigError("tf_flags length mismatch");
    if (grad.size() != model.params.size()) throw ConfigError("grad buffer size mismatch");
    const double* P = model.params.data();

    // --- forward ---
    std::vector<StepCache> enc(static_cast<std::size_t>(L)), dec(static_cast<std::size_t>(L));
    std::vector<double> h(static_cast<std::size_t>(H), 0.0), c(static_cast<std::size_t>(H), 0.0);
    for (int t = 0; t < L; ++t) {
        forward_step(model, lay, 0, {seq.values[static_cast<std::size_t>(t)]}, h, c,
                     enc[static_cast<std::size_t>(t)]);
        h = enc[static_cast<std::size_t>(t)].h;
        c = enc[static_cast<std::size_t>(t)].c;
    }
    std::vector<double> latent(kLatentDim, 0.0);
    matvec(P + lay.latent_proj_off, kLatentDim, H, h.data(), latent.data());

    std::vector<double> hd(static_cast<std::size_t>(H), 0.0);
    matvec(P + lay.latent_expand_off, H, kLatentDim, latent.data(), hd.data());
    std::vector<double> cd(static_cast<std::size_t>(H), 0.0);
    std::vector<double> preds(static_cast<std::size_t>(L), 0.0);
    for (int j = 0; j < L; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        double u = 0.0;
        if (j > 0) u = tf_flags[uj] ? seq.values[uj - 1] : preds[uj - 1];
        forward_step(model, lay, 1, {u}, hd, cd, dec[uj]);
        hd = dec[uj].h;
        cd = dec[uj].c;
        matvec(P + lay.output_head_off, 1, H, hd.data(), &preds[uj]);
    }
    const double loss = mse_loss(seq.values, preds);

    // --- backward ---
    double* G = grad.data();
    std::vector<double> dpred(static_cast<std::size_t>(L), 0.0);
    for (int j = 0; j < L; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        dpred[uj] = scale * 2.0 / L * (preds[uj] - seq.values[uj]);
    }
    std::vector<double> dh(static_cast<std::size_t>(H), 0.0);
    std::vector<double> dc(static_cast<std::size_t>(H), 0.0);
    std::vector<double> dx, dh_prev, dc_prev;
    for (int j = L - 1; j >= 0; --j) {
        const auto uj = static_cast<std::size_t>(j);
        // adjoint of h_dec[j] from the output head plus recurrence
        outer_acc(G + lay.output_head_off, 1, H, &dpred[uj], dec[uj].h.data());
        matTvec_acc(P + lay.output_head_off, 1, H, &dpred[uj], dh.data());
        backward_step(model, lay, 1, dec[uj], dh, dc, grad, dx, dh_prev, dc_prev);
        if (j > 0 && !tf_flags[uj]) dpred[uj - 1] += dx[0];  // free-running input
        dh = dh_prev;
        dc = dc_prev;
    }
    // dh is now the adjoint of the decoder initial hidden state
    outer_acc(G + lay.latent_expand_off, H, kLatentDim, dh.data(), latent.data());
    std::vector<double> dlatent(kLatentDim, 0.0);
    matTvec_acc(P + lay.latent_expand_off, H, kLatentDim, dh.data(), dlatent.data());

    outer_acc(G + lay.latent_proj_off, kLatentDim, H, dlatent.data(),
              enc[static_cast<std::size_t>(L - 1)].h.data());
    dh.assign(static_cast<std::size_t>(H), 0.0);
    matTvec_acc(P + lay.latent_proj_off, kLatentDim, H, dlatent.data(), dh.data());
    dc.assign(static_cast<std::size_t>(H), 0.0);
    for (int t = L - 1; t >= 0; --t) {
        backward_step(model, lay, 0, enc[static_cast<std::size_t>(t)], dh, dc, grad, dx, dh_prev,
                      dc_prev);
        dh = dh_prev;
        dc = dc_prev;
    }
    return loss;
}

double batch_loss_and_grad(const Seq2SeqModel& model, const std::vector<ReturnSequence>& dataset,
                           const std::vector<std::vector<std::uint8_t>>& tf_flags,
                           std::vector<double>& grad, Execution exec) {
    if (dataset.empty()) throw DataError("empty dataset");
    const std::size_t n = dataset.size();
    const std::size_t p = model.params.size();
    const double scale = 1.0 / static_cast<double>(n);
    grad.assign(p, 0.0);

    std::vector<std::vector<double>> seq_grads(n);
    std::vector<double> losses(n, 0.0);
    const bool parallel = exec == Execution::Parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const auto ui = static_cast<std::size_t>(i);
        seq_grads[ui].assign(p, 0.0);
        losses[ui] =
            sequence_loss_and_grad(model, dataset[ui], tf_flags[ui], scale, seq_grads[ui]);
    }
    // fixed-order reduction keeps the result independent of thread scheduling
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        loss += losses[i];
        for (std::size_t j = 0; j < p; ++j) grad[j] += seq_grads[i][j];
    }
    return loss * scale;
}

TrainResult train_autoencoder(const std::vector<ReturnSequence>& dataset, const TrainConfig& config,
                              CellKind kind, Execution exec) {
    config.validate();
    if (dataset.empty()) throw DataError("train_autoencoder: empty dataset");
    const int L = static_cast<int>(dataset.front().values.size());
    if (L < 2) throw DataError("sequences must have length >= 2");
    for (const auto& s : dataset) {
        if (static_cast<int>(s.values.size()) != L)
            throw DataError("non-uniform sequence length for entity '" + s.entity_id + "'");
    }

    ModelDims dims{kind, 1, config.hidden_width, config.qubits};
    Seq2SeqModel model = init_model(dims, L, config.seed);
    const std::size_t p = model.params.size();

    // Adam, full batch
    std::vector<double> m(p, 0.0), v(p, 0.0), grad(p, 0.0);
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;

    auto epoch_flags = [&](int epoch) {
        std::vector<std::vector<std::uint8_t>> flags(dataset.size());
        for (std::size_t i = 0; i < dataset.size(); ++i)
            flags[i] = teacher_forcing_flags(config.seed, epoch, i, L, config.teacher_forcing_prob);
        return flags;
    };

    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(config.epochs) + 1);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double loss = batch_loss_and_grad(model, dataset, epoch_flags(epoch), grad, exec);
        if (!std::isfinite(loss)) throw NumericalError("training diverged at epoch " +
                                                       std::to_string(epoch));
        history.push_back(loss);
        const double t = static_cast<double>(epoch + 1);
        const double corr1 = 1.0 - std::pow(kBeta1, t);
        const double corr2 = 1.0 - std::pow(kBeta2, t);
        for (std::size_t j = 0; j < p; ++j) {
            m[j] = kBeta1 * m[j] + (1.0 - kBeta1) * grad[j];
            v[j] = kBeta2 * v[j] + (1.0 - kBeta2) * grad[j] * grad[j];
            model.params[j] -= config.learning_rate * (m[j] / corr1) /
                               (std::sqrt(v[j] / corr2) + kEps);
        }
    }
    const double final_loss =
        batch_loss_and_grad(model, dataset, epoch_flags(config.epochs), grad, exec);
    if (!std::isfinite(final_loss)) throw NumericalError("training diverged");
    history.push_back(final_loss);
    return {std::move(model), std::move(history)};
}

}  // namespace qrbf
