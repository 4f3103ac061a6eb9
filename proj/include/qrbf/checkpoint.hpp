#pragma once

#include <string>

#include "qrbf/recurrent.hpp"

namespace qrbf {

struct Checkpoint {
    Seq2SeqModel model;
    std::string window_label;  // which rolling window trained this model
    TrainConfig train_config;
};

// Versioned JSON serialization; doubles round-trip exactly.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace qrbf
