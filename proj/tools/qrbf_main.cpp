// qrbf: QLSTM-RBF portfolio pipeline CLI.
//
// Subcommands: synth, train, embed, kernel, backtest, gridsearch.
// Exit codes: 0 success, 1 data error, 2 config error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrbf/backtest.hpp"
#include "qrbf/checkpoint.hpp"
#include "qrbf/data.hpp"
#include "qrbf/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct AppConfig {
    std::string returns_path;
    std::string sectors_path;
    std::string out_dir = "out";
    std::string from_quarter = "2022Q2";
    std::string to_quarter = "2025Q2";
    std::string mode = "quantum";  // quantum | classical | both
    std::string checkpoint_path;
    std::string window_label;
    std::string grid;  // comma-separated lambda grid override

    qrbf::PipelineConfig pipeline;
    qrbf::SyntheticConfig synth;
};

void apply_json_config(AppConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qrbf::ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw qrbf::ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    auto get = [&](const char* key, auto& target) {
        if (j.contains(key)) target = j.at(key).get<std::decay_t<decltype(target)>>();
    };
    get("returns", cfg.returns_path);
    get("sectors", cfg.sectors_path);
    get("out", cfg.out_dir);
    get("from", cfg.from_quarter);
    get("to", cfg.to_quarter);
    get("mode", cfg.mode);
    get("seed", cfg.pipeline.train.seed);
    get("hidden", cfg.pipeline.train.hidden_width);
    get("qubits", cfg.pipeline.train.qubits);
    get("epochs", cfg.pipeline.train.epochs);
    get("learning_rate", cfg.pipeline.train.learning_rate);
    get("p_tf", cfg.pipeline.train.teacher_forcing_prob);
    get("lambda", cfg.pipeline.divmom.lambda);
    get("k", cfg.pipeline.divmom.k);
    get("gamma", cfg.pipeline.graph.gamma);
    get("graph_step", cfg.pipeline.graph.step_size);
    get("graph_iters", cfg.pipeline.graph.max_iters);
    get("graph_tol", cfg.pipeline.graph.tolerance);
    get("grid", cfg.grid);
    if (j.contains("synth")) {
        const json& s = j.at("synth");
        auto gs = [&](const char* key, auto& target) {
            if (s.contains(key)) target = s.at(key).get<std::decay_t<decltype(target)>>();
        };
        gs("num_sectors", cfg.synth.num_sectors);
        gs("entities_per_sector", cfg.synth.entities_per_sector);
        gs("num_weeks", cfg.synth.num_weeks);
        gs("factor_vol", cfg.synth.factor_vol);
        gs("factor_persistence", cfg.synth.factor_persistence);
        gs("idio_vol", cfg.synth.idio_vol);
        gs("momentum_drift", cfg.synth.momentum_drift);
        gs("seed", cfg.synth.seed);
        std::string start;
        gs("start_date", start);
        if (!start.empty()) cfg.synth.start_date = qrbf::Date::parse(start);
    }
}

qrbf::CellKind parse_mode(const std::string& mode) {
    if (mode == "quantum") return qrbf::CellKind::Quantum;
    if (mode == "classical") return qrbf::CellKind::Classical;
    throw qrbf::ConfigError("mode must be quantum or classical (or both for backtest), got '" +
                            mode + "'");
}

std::vector<double> parse_grid(const std::string& grid) {
    if (grid.empty()) return qrbf::default_lambda_grid();
    std::vector<double> values;
    std::istringstream in(grid);
    std::string token;
    while (std::getline(in, token, ',')) {
        try {
            values.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw qrbf::ConfigError("bad lambda grid entry '" + token + "'");
        }
        if (values.back() < 0.0) throw qrbf::ConfigError("lambda must be >= 0");
    }
    if (values.empty()) throw qrbf::ConfigError("empty lambda grid");
    return values;
}

void ensure_out_dir(const AppConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw qrbf::DataError("cannot create output directory '" + cfg.out_dir + "'");
}

std::ofstream open_out(const AppConfig& cfg, const std::string& name) {
    const std::string path = (fs::path(cfg.out_dir) / name).string();
    std::ofstream out(path);
    if (!out) throw qrbf::DataError("cannot write '" + path + "'");
    return out;
}

qrbf::ReturnsTable load_table(const AppConfig& cfg) {
    if (cfg.returns_path.empty()) throw qrbf::ConfigError("--returns is required");
    std::vector<std::string> warnings;
    qrbf::ReturnsTable table = qrbf::load_returns_csv(cfg.returns_path, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return table;
}

// --- subcommands -----------------------------------------------------------

int cmd_synth(const AppConfig& cfg) {
    ensure_out_dir(cfg);
    auto [table, sectors] = qrbf::generate_synthetic_universe(cfg.synth);
    qrbf::write_returns_csv(table, (fs::path(cfg.out_dir) / "returns.csv").string());
    qrbf::write_sectors_csv(sectors, (fs::path(cfg.out_dir) / "sectors.csv").string());
    std::cout << "wrote " << table.num_weeks() << " weeks x " << table.num_entities()
              << " entities to " << cfg.out_dir << '\n';
    return 0;
}

// Trains the model for one rolling window and writes a checkpoint plus the
// per-epoch loss history.
int cmd_train(const AppConfig& cfg) {
    if (cfg.window_label.empty()) throw qrbf::ConfigError("--window is required");
    cfg.pipeline.validate();
    ensure_out_dir(cfg);
    const qrbf::ReturnsTable table = load_table(cfg);
    const auto windows = qrbf::make_rolling_windows(cfg.window_label, cfg.window_label);
    const qrbf::CellKind kind = parse_mode(cfg.mode);

    std::vector<std::size_t> before;
    for (std::size_t w = 0; w < table.num_weeks(); ++w)
        if (table.dates[w] < windows.front().test_start) before.push_back(w);
    if (before.size() < 52)
        throw qrbf::DataError("window " + cfg.window_label + ": only " +
                              std::to_string(before.size()) + " weeks precede the test span");
    std::vector<qrbf::ReturnSequence> seqs(table.num_entities());
    for (std::size_t e = 0; e < table.num_entities(); ++e) {
        seqs[e].entity_id = table.entities[e];
        for (std::size_t i = before.size() - 52; i < before.size(); ++i)
            seqs[e].values.push_back(table.returns[before[i]][e]);
    }
    qrbf::TrainConfig tc = cfg.pipeline.train;
    tc.seed = qrbf::window_seed(cfg.pipeline.train.seed, cfg.window_label);
    const qrbf::TrainResult trained = qrbf::train_autoencoder(seqs, tc, kind, cfg.pipeline.exec);

    qrbf::Checkpoint ckpt{trained.model, cfg.window_label, tc};
    const std::string name = "checkpoint_" + cfg.window_label + "_" + cfg.mode + ".json";
    qrbf::save_checkpoint(ckpt, (fs::path(cfg.out_dir) / name).string());

    auto loss_out = open_out(cfg, "loss_" + cfg.window_label + "_" + cfg.mode + ".csv");
    loss_out << "epoch,mean_loss\n";
    for (std::size_t e = 0; e < trained.loss_history.size(); ++e)
        loss_out << e << ',' << fmt12(trained.loss_history[e]) << '\n';
    std::cout << "wrote " << name << " (final loss " << fmt12(trained.loss_history.back())
              << ")\n";
    return 0;
}

struct EmbedData {
    qrbf::EmbeddingSet embeddings;
    std::string label;
};

EmbedData embed_from_checkpoint(const AppConfig& cfg) {
    if (cfg.checkpoint_path.empty()) throw qrbf::ConfigError("--checkpoint is required");
    const qrbf::Checkpoint ckpt = qrbf::load_checkpoint(cfg.checkpoint_path);
    const qrbf::ReturnsTable table = load_table(cfg);
    const auto windows = qrbf::make_rolling_windows(ckpt.window_label, ckpt.window_label);

    std::vector<std::size_t> before;
    for (std::size_t w = 0; w < table.num_weeks(); ++w)
        if (table.dates[w] < windows.front().test_start) before.push_back(w);
    if (before.size() < 52)
        throw qrbf::DataError("not enough history before " + ckpt.window_label);
    std::vector<qrbf::ReturnSequence> seqs(table.num_entities());
    for (std::size_t e = 0; e < table.num_entities(); ++e) {
        seqs[e].entity_id = table.entities[e];
        for (std::size_t i = before.size() - 52; i < before.size(); ++i)
            seqs[e].values.push_back(table.returns[before[i]][e]);
    }
    return {qrbf::embed_all(ckpt.model, seqs, ckpt.window_label, cfg.pipeline.exec),
            ckpt.window_label};
}

void write_embeddings_csv(const AppConfig& cfg, const EmbedData& data) {
    auto out = open_out(cfg, "embeddings_" + data.label + ".csv");
    out << "entity_id,x,y,period_id\n";
    for (std::size_t i = 0; i < data.embeddings.size(); ++i) {
        out << data.embeddings.entity_ids[i] << ',' << fmt12(data.embeddings.coords[i][0]) << ','
            << fmt12(data.embeddings.coords[i][1]) << ',' << data.embeddings.period_id << '\n';
    }
}

int cmd_embed(const AppConfig& cfg) {
    ensure_out_dir(cfg);
    const EmbedData data = embed_from_checkpoint(cfg);
    write_embeddings_csv(cfg, data);
    std::cout << "wrote embeddings_" << data.label << ".csv (" << data.embeddings.size()
              << " rows)\n";
    return 0;
}

int cmd_kernel(const AppConfig& cfg) {
    ensure_out_dir(cfg);
    const EmbedData data = embed_from_checkpoint(cfg);
    write_embeddings_csv(cfg, data);
    const qrbf::KernelMatrix K = qrbf::rbf_kernel(data.embeddings, cfg.pipeline.exec);

    auto kout = open_out(cfg, "kernel_" + data.label + ".csv");
    kout << "entity_id";
    for (const auto& id : data.embeddings.entity_ids) kout << ',' << id;
    kout << '\n';
    for (std::size_t i = 0; i < K.n; ++i) {
        kout << data.embeddings.entity_ids[i];
        for (std::size_t j = 0; j < K.n; ++j) kout << ',' << fmt12(K.at(i, j));
        kout << '\n';
    }

    const std::vector<double> density = qrbf::kernel_density(K);
    auto dout = open_out(cfg, "density_" + data.label + ".csv");
    dout << "entity_id,density\n";
    for (std::size_t i = 0; i < K.n; ++i)
        dout << data.embeddings.entity_ids[i] << ',' << fmt12(density[i]) << '\n';
    std::cout << "wrote kernel_" << data.label << ".csv (sigma " << fmt12(K.sigma) << ")\n";
    return 0;
}

void write_backtest_outputs(const AppConfig& cfg, const qrbf::BacktestResult& result,
                            const std::string& suffix) {
    auto mout = open_out(cfg, "metrics" + suffix + ".csv");
    mout << "period,strategy,cagr,vol,sharpe,max_dd,degenerate_vol\n";
    auto emit = [&](const std::string& period, const char* strategy, const qrbf::MetricsRow& r) {
        mout << period << ',' << strategy << ',' << fmt12(r.cagr) << ',' << fmt12(r.vol) << ','
             << fmt12(r.sharpe) << ',' << fmt12(r.max_dd) << ',' << (r.degenerate_vol ? 1 : 0)
             << '\n';
    };
    std::vector<std::pair<const char*, const std::vector<qrbf::MetricsRow>*>> strategies = {
        {"divmom", &result.divmom_metrics},
        {"graph", &result.graph_metrics},
        {"benchmark", &result.benchmark_metrics}};
    for (std::size_t w = 0; w < result.periods.size(); ++w) {
        for (auto& [name, rows] : strategies) emit(result.periods[w].label, name, (*rows)[w]);
    }
    for (auto& [name, rows] : strategies) {
        qrbf::MetricsRow meanr;
        for (const auto& r : *rows) {
            meanr.cagr += r.cagr;
            meanr.vol += r.vol;
            meanr.sharpe += r.sharpe;
            meanr.max_dd += r.max_dd;
        }
        const double n = static_cast<double>(rows->size());
        meanr.cagr /= n;
        meanr.vol /= n;
        meanr.sharpe /= n;
        meanr.max_dd /= n;
        emit("MEAN", name, meanr);
    }
    mout << "FINAL_NET_VALUE,divmom," << fmt12(result.divmom_equity.back()) << ",,,,\n";
    mout << "FINAL_NET_VALUE,graph," << fmt12(result.graph_equity.back()) << ",,,,\n";
    mout << "FINAL_NET_VALUE,benchmark," << fmt12(result.benchmark_equity.back()) << ",,,,\n";

    auto eout = open_out(cfg, "equity" + suffix + ".csv");
    eout << "date,divmom,graph,benchmark\n";
    for (std::size_t i = 0; i < result.equity_dates.size(); ++i) {
        eout << result.equity_dates[i].to_string() << ',' << fmt12(result.divmom_equity[i]) << ','
             << fmt12(result.graph_equity[i]) << ',' << fmt12(result.benchmark_equity[i]) << '\n';
    }

    for (auto strategy : {std::string("divmom"), std::string("graph")}) {
        auto wout = open_out(cfg, "weights_" + strategy + suffix + ".csv");
        wout << "period_id,entity_id,weight\n";
        for (const auto& p : result.periods) {
            const qrbf::PortfolioWeights& w =
                strategy == "divmom" ? p.weights.divmom : p.weights.graph;
            for (std::size_t e = 0; e < w.entity_ids.size(); ++e)
                wout << p.label << ',' << w.entity_ids[e] << ',' << fmt12(w.weights[e]) << '\n';
        }
    }
}

int cmd_backtest(const AppConfig& cfg) {
    cfg.pipeline.validate();
    ensure_out_dir(cfg);
    const qrbf::ReturnsTable table = load_table(cfg);
    const auto windows = qrbf::make_rolling_windows(cfg.from_quarter, cfg.to_quarter);

    std::vector<std::string> modes;
    if (cfg.mode == "both") {
        modes = {"quantum", "classical"};
    } else {
        modes = {cfg.mode};
    }
    for (const std::string& mode : modes) {
        qrbf::PipelineConfig pc = cfg.pipeline;
        pc.mode = parse_mode(mode);
        const qrbf::BacktestResult result = qrbf::run_backtest(windows, table, pc);
        write_backtest_outputs(cfg, result, "_" + mode);
        for (const auto& p : result.periods) {
            if (!p.weights.graph_converged)
                std::cerr << "warning: graph solver did not converge in " << p.label << '\n';
        }
        std::cout << mode << ": " << windows.size() << " windows, final net values divmom="
                  << fmt12(result.divmom_equity.back())
                  << " graph=" << fmt12(result.graph_equity.back())
                  << " benchmark=" << fmt12(result.benchmark_equity.back()) << '\n';
    }
    return 0;
}

int cmd_gridsearch(const AppConfig& cfg) {
    cfg.pipeline.validate();
    ensure_out_dir(cfg);
    const qrbf::ReturnsTable table = load_table(cfg);
    const auto windows = qrbf::make_rolling_windows(cfg.from_quarter, cfg.to_quarter);
    qrbf::PipelineConfig pc = cfg.pipeline;
    pc.mode = parse_mode(cfg.mode == "both" ? "quantum" : cfg.mode);
    const std::vector<double> grid = parse_grid(cfg.grid);

    const qrbf::GridSearchResult result = qrbf::grid_search_lambda(grid, windows, table, pc);
    auto out = open_out(cfg, "gridsearch.csv");
    out << "lambda,mean_sharpe,gap_to_graph,final_net_value\n";
    for (const auto& row : result.rows) {
        char lbuf[16];
        std::snprintf(lbuf, sizeof lbuf, "%.2f", row.lambda);
        out << lbuf << ',' << fmt12(row.mean_sharpe) << ',' << fmt12(row.gap_to_graph) << ','
            << fmt12(row.final_net_value) << '\n';
    }
    out << "RBF-Graph," << fmt12(result.graph_mean_sharpe) << ",,"
        << fmt12(result.graph_final_net_value) << '\n';
    std::cout << "wrote gridsearch.csv (" << result.rows.size() << " lambda rows + RBF-Graph)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    AppConfig cfg;
    // pre-scan for --config so flags can override file values
    for (int i = 1; i < argc - 1; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_json_config(cfg, argv[i + 1]);
            } catch (const qrbf::ConfigError& e) {
                std::cerr << "config error: " << e.what() << '\n';
                return 2;
            }
        }
    }

    CLI::App app{"QLSTM-RBF portfolio pipeline"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override it)");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--returns", cfg.returns_path, "returns CSV (date,ticker,return)");
        sub->add_option("--sectors", cfg.sectors_path, "sectors CSV (ticker,sector)");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--seed", cfg.pipeline.train.seed, "RNG seed");
        sub->add_option("--mode", cfg.mode, "quantum|classical (backtest also: both)");
        sub->add_option("--hidden", cfg.pipeline.train.hidden_width, "hidden width H");
        sub->add_option("--qubits", cfg.pipeline.train.qubits, "qubits per gate circuit");
        sub->add_option("--epochs", cfg.pipeline.train.epochs, "training epochs");
        sub->add_option("--learning-rate", cfg.pipeline.train.learning_rate, "Adam step size");
        sub->add_option("--p-tf", cfg.pipeline.train.teacher_forcing_prob,
                        "teacher forcing probability");
        sub->add_option("--lambda", cfg.pipeline.divmom.lambda, "DivMom similarity penalty");
        sub->add_option("--k", cfg.pipeline.divmom.k, "DivMom portfolio cardinality");
        sub->add_option("--gamma", cfg.pipeline.graph.gamma, "graph momentum weight");
        sub->add_option("--from", cfg.from_quarter, "first test quarter, e.g. 2022Q2");
        sub->add_option("--to", cfg.to_quarter, "last test quarter");
        sub->add_flag_callback(
            "--serial", [&] { cfg.pipeline.exec = qrbf::Execution::Serial; },
            "disable OpenMP parallel kernels");
    };

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic sector-factor universe");
    add_common(synth);
    synth->add_option("--sectors-count", cfg.synth.num_sectors, "number of sectors");
    synth->add_option("--entities-per-sector", cfg.synth.entities_per_sector, "entities per sector");
    synth->add_option("--weeks", cfg.synth.num_weeks, "number of weekly observations");
    synth->add_option("--factor-vol", cfg.synth.factor_vol, "sector factor stdev");
    synth->add_option("--factor-persistence", cfg.synth.factor_persistence,
                      "AR(1) coefficient of the sector factors");
    synth->add_option("--idio-vol", cfg.synth.idio_vol, "idiosyncratic stdev");
    synth->add_option("--drift", cfg.synth.momentum_drift, "planted per-sector drift");
    synth->add_option("--synth-seed", cfg.synth.seed, "synthetic generator seed");

    CLI::App* train = app.add_subcommand("train", "train one rolling-window autoencoder");
    add_common(train);
    train->add_option("--window", cfg.window_label, "quarter label, e.g. 2022Q2")->required();

    CLI::App* embed = app.add_subcommand("embed", "emit latent embeddings for a checkpoint");
    add_common(embed);
    embed->add_option("--checkpoint", cfg.checkpoint_path, "checkpoint file")->required();

    CLI::App* kernel = app.add_subcommand("kernel", "emit RBF kernel and density for a checkpoint");
    add_common(kernel);
    kernel->add_option("--checkpoint", cfg.checkpoint_path, "checkpoint file")->required();

    CLI::App* backtest = app.add_subcommand("backtest", "rolling quarterly backtest");
    add_common(backtest);

    CLI::App* gridsearch = app.add_subcommand("gridsearch", "DivMom lambda grid search");
    add_common(gridsearch);
    gridsearch->add_option("--grid", cfg.grid, "comma-separated lambda values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(cfg);
        if (train->parsed()) return cmd_train(cfg);
        if (embed->parsed()) return cmd_embed(cfg);
        if (kernel->parsed()) return cmd_kernel(cfg);
        if (backtest->parsed()) return cmd_backtest(cfg);
        if (gridsearch->parsed()) return cmd_gridsearch(cfg);
    } catch (const qrbf::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 1;
    } catch (const qrbf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const qrbf::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
