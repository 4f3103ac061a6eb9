#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrbf/vqc.hpp"

namespace qrbf {

enum class CellKind { Quantum, Classical };

enum class Execution { Serial, Parallel };

struct ReturnSequence {
    std::string entity_id;
    std::vector<double> values;  // weekly simple returns
};

struct TrainConfig {
    double learning_rate = 0.01;
    int epochs = 200;
    double teacher_forcing_prob = 0.5;
    std::uint64_t seed = 42;
    int hidden_width = 16;
    int qubits = 4;

    void validate() const;
};

struct ModelDims {
    CellKind kind = CellKind::Quantum;
    int d_in = 1;
    int hidden = 16;
    int qubits = 4;
};

// Gate order: input, forget, output, candidate.
constexpr int kNumGates = 4;
constexpr int kLatentDim = 2;

// All trainable parameters in one flat vector; a layout object maps named
// blocks to offsets. Quantum gate block: compression q x (d_in+H), readout
// H x q, bias H, vqc angles q x 2. Classical gate block: W H x (d_in+H),
// bias H. Cells are symmetric (decoder is the same kind as the encoder).
struct ModelLayout {
    ModelDims dims;
    std::size_t gate_size = 0;
    std::size_t cell_size = 0;
    std::size_t latent_proj_off = 0;    // 2 x H
    std::size_t latent_expand_off = 0;  // H x 2
    std::size_t output_head_off = 0;    // d_in x H
    std::size_t total = 0;

    explicit ModelLayout(const ModelDims& dims);

    // cell: 0 = encoder, 1 = decoder; gate in [0, 4)
    std::size_t gate_off(int cell, int gate) const { return cell_size * cell + gate_size * gate; }
    std::size_t compression_off(int cell, int gate) const;  // quantum only
    std::size_t readout_off(int cell, int gate) const;      // quantum only
    std::size_t bias_off(int cell, int gate) const;
    std::size_t angles_off(int cell, int gate) const;  // quantum only
    std::size_t dense_off(int cell, int gate) const;   // classical only
};

struct Seq2SeqModel {
    ModelDims dims;
    int seq_len = 0;  // L the model was configured/trained for
    std::vector<double> params;

    ModelLayout layout() const { return ModelLayout(dims); }
};

Seq2SeqModel init_model(const ModelDims& dims, int seq_len, std::uint64_t seed);

// --- single-cell steps (exposed for unit tests) ---------------------------

struct CellStepResult {
    std::vector<double> h;
    std::vector<double> c;
};

// Per gate g: a_g = readout_g * vqc(compression_g * [x; h_prev]) + bias_g,
// then standard LSTM gate combination (shared with the classical path).
CellStepResult qlstm_cell_step(const std::vector<double>& x, const std::vector<double>& h_prev,
                               const std::vector<double>& c_prev, const Seq2SeqModel& model,
                               int cell_index);

CellStepResult lstm_cell_step(const std::vector<double>& x, const std::vector<double>& h_prev,
                              const std::vector<double>& c_prev, const Seq2SeqModel& model,
                              int cell_index);

// --- sequence-level API ----------------------------------------------------

// latent = latent_proj * h_L from zero initial state; always 2-dimensional.
std::vector<double> encode(const Seq2SeqModel& model, const ReturnSequence& seq);

// Autoregressive reconstruction. Teacher-forcing coins are flipped per
// timestep from `rng`; the first-step input is a zero vector. p_tf = 0 uses
// only the model's own predictions.
std::vector<double> decode(const Seq2SeqModel& model, const std::vector<double>& latent,
                           const ReturnSequence& target, double p_tf, std::uint64_t rng_seed);

double mse_loss(const std::vector<double>& target, const std::vector<double>& prediction);

// Loss and full parameter gradient for one sequence with fixed per-step
// teacher-forcing decisions (tf_flags[j] for decoder steps j >= 1; flag set
// means ground truth is fed). grad must have model.params.size() entries and
// is accumulated into with the given scale factor.
double sequence_loss_and_grad(const Seq2SeqModel& model, const ReturnSequence& seq,
                              const std::vector<std::uint8_t>& tf_flags, double scale,
                              std::vector<double>& grad);

// Mean loss over the dataset plus the mean gradient. Serial and parallel
// executions produce bit-identical results (per-sequence gradients are
// reduced in dataset order).
double batch_loss_and_grad(const Seq2SeqModel& model, const std::vector<ReturnSequence>& dataset,
                           const std::vector<std::vector<std::uint8_t>>& tf_flags,
                           std::vector<double>& grad, Execution exec);

struct TrainResult {
    Seq2SeqModel model;
    std::vector<double> loss_history;  // mean loss per epoch (pre-update)
};

TrainResult train_autoencoder(const std::vector<ReturnSequence>& dataset, const TrainConfig& config,
                              CellKind kind, Execution exec = Execution::Parallel);

// Deterministic per-(epoch, sequence) teacher-forcing flags.
std::vector<std::uint8_t> teacher_forcing_flags(std::uint64_t seed, int epoch, std::size_t seq_index,
                                                int seq_len, double p_tf);

}  // namespace qrbf
