#include "qrbf/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

#include "qrbf/errors.hpp"

namespace qrbf {

namespace {
constexpr int kFormatVersion = 1;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["mode"] = ckpt.model.dims.kind == CellKind::Quantum ? "quantum" : "classical";
    j["d_in"] = ckpt.model.dims.d_in;
    j["hidden"] = ckpt.model.dims.hidden;
    j["qubits"] = ckpt.model.dims.qubits;
    j["seq_len"] = ckpt.model.seq_len;
    j["window"] = ckpt.window_label;
    j["train"] = {{"learning_rate", ckpt.train_config.learning_rate},
                  {"epochs", ckpt.train_config.epochs},
                  {"teacher_forcing_prob", ckpt.train_config.teacher_forcing_prob},
                  {"seed", ckpt.train_config.seed},
                  {"hidden_width", ckpt.train_config.hidden_width},
                  {"qubits", ckpt.train_config.qubits}};
    j["params"] = ckpt.model.params;

    std::ofstream out(path);
    if (!out) throw DataError("cannot write checkpoint '" + path + "'");
    out << j.dump(2) << '\n';
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open checkpoint '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("checkpoint '" + path + "' is not valid JSON: " + e.what());
    }
    if (j.value("format_version", -1) != kFormatVersion) {
        throw DataError("checkpoint '" + path + "' has unsupported format version");
    }
    Checkpoint ckpt;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode != "quantum" && mode != "classical")
        throw DataError("checkpoint '" + path + "': unknown mode '" + mode + "'");
    ckpt.model.dims.kind = mode == "quantum" ? CellKind::Quantum : CellKind::Classical;
    ckpt.model.dims.d_in = j.at("d_in").get<int>();
    ckpt.model.dims.hidden = j.at("hidden").get<int>();
    ckpt.model.dims.qubits = j.at("qubits").get<int>();
    ckpt.model.seq_len = j.at("seq_len").get<int>();
    ckpt.window_label = j.value("window", "");
    const auto& t = j.at("train");
    ckpt.train_config.learning_rate = t.at("learning_rate").get<double>();
    ckpt.train_config.epochs = t.at("epochs").get<int>();
    ckpt.train_config.teacher_forcing_prob = t.at("teacher_forcing_prob").get<double>();
    ckpt.train_config.seed = t.at("seed").get<std::uint64_t>();
    ckpt.train_config.hidden_width = t.at("hidden_width").get<int>();
    ckpt.train_config.qubits = t.at("qubits").get<int>();
    ckpt.model.params = j.at("params").get<std::vector<double>>();

    const ModelLayout lay(ckpt.model.dims);
    if (ckpt.model.params.size() != lay.total) {
        throw DataError("checkpoint '" + path + "': parameter count " +
                        std::to_string(ckpt.model.params.size()) + " does not match layout " +
                        std::to_string(lay.total));
    }
    return ckpt;
}

}  // namespace qrbf
