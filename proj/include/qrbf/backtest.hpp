#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrbf/allocation.hpp"
#include "qrbf/data.hpp"
#include "qrbf/dates.hpp"
#include "qrbf/errors.hpp"
#include "qrbf/manifold.hpp"

namespace qrbf {

struct RollingWindow {
    std::string label;       // e.g. "2022Q2"
    Date train_start;        // 52 weeks preceding the test quarter
    Date train_end;
    Date test_start;
    Date test_end;
};

// Per-window model seed: the base seed mixed with the window label, so every
// quarter trains a distinct but reproducible model.
std::uint64_t window_seed(std::uint64_t base, const std::string& label);

// One window per calendar quarter from first to last inclusive.
std::vector<RollingWindow> make_rolling_windows(const std::string& first_test_quarter,
                                                const std::string& last_test_quarter);

struct PipelineConfig {
    TrainConfig train;
    DivMomConfig divmom;
    GraphConfig graph;
    CellKind mode = CellKind::Quantum;
    Execution exec = Execution::Parallel;

    void validate() const {
        train.validate();
        if (divmom.lambda < 0.0) throw ConfigError("lambda must be >= 0");
        if (divmom.k < 1) throw ConfigError("k must be positive");
        if (!(graph.gamma > 0.0)) throw ConfigError("gamma must be positive");
    }
};

// Everything derived from the training span of one window: the trained
// model's embeddings, the kernel, the momentum signal, and both allocators'
// weights. Test-span data never enters here (no look-ahead).
struct PeriodWeights {
    EmbeddingSet embeddings;
    KernelMatrix kernel;
    MomentumSignal momentum;
    PortfolioWeights divmom;
    PortfolioWeights graph;
    bool graph_converged = true;
    std::vector<double> loss_history;
};

PeriodWeights compute_period_weights(const RollingWindow& window, const ReturnsTable& table,
                                     const PipelineConfig& cfg);

struct PeriodResult {
    std::string label;
    std::vector<Date> test_dates;
    std::vector<double> divmom_returns;
    std::vector<double> graph_returns;
    std::vector<double> benchmark_returns;  // equal-weight universe
    PeriodWeights weights;
};

// Trains a fresh model on the train span, allocates, and applies the fixed
// weights over the test-quarter weeks.
PeriodResult run_period(const RollingWindow& window, const ReturnsTable& table,
                        const PipelineConfig& cfg);

struct EquityCurve {
    std::vector<Date> dates;    // one entry per week
    std::vector<double> values; // values[0] corresponds to the first week's close
};

// E starts at 1.0 and compounds (1 + R_j) across periods in order; each
// period starts from the previous period's final value. Returns one value
// per weekly return (the running E after that week).
std::vector<double> chain_equity(const std::vector<std::vector<double>>& period_returns);

struct MetricsRow {
    double cagr = 0.0;
    double vol = 0.0;
    double sharpe = 0.0;
    double max_dd = 0.0;
    bool degenerate_vol = false;  // vol == 0; sharpe reported as 0
};

// Excess-return statistics: e_j = r_j - b_j, CAGR = prod(1+e)^(52/T) - 1,
// Vol = sample stdev * sqrt(52), Sharpe = mean(e)*52 / Vol, MaxDD on the
// compounded excess equity path.
MetricsRow compute_metrics(const std::vector<double>& weekly_returns,
                           const std::vector<double>& benchmark_weekly_returns);

struct BacktestResult {
    std::vector<PeriodResult> periods;
    std::vector<MetricsRow> divmom_metrics;   // per window, excess vs benchmark
    std::vector<MetricsRow> graph_metrics;
    std::vector<MetricsRow> benchmark_metrics;  // excess vs itself (zeros)
    std::vector<double> divmom_equity;   // chained across windows, absolute returns
    std::vector<double> graph_equity;
    std::vector<double> benchmark_equity;
    std::vector<Date> equity_dates;
};

BacktestResult run_backtest(const std::vector<RollingWindow>& windows, const ReturnsTable& table,
                            const PipelineConfig& cfg);

struct GridSearchRow {
    double lambda = 0.0;
    double mean_sharpe = 0.0;
    double gap_to_graph = 0.0;
    double final_net_value = 0.0;
};

struct GridSearchResult {
    std::vector<GridSearchRow> rows;
    double graph_mean_sharpe = 0.0;
    double graph_final_net_value = 0.0;
};

// Runs the full backtest per lambda. Training does not depend on lambda, so
// each window is trained once and the DivMom selection is re-evaluated on
// the cached kernel and momentum signal.
GridSearchResult grid_search_lambda(const std::vector<double>& lambda_grid,
                                    const std::vector<RollingWindow>& windows,
                                    const ReturnsTable& table, const PipelineConfig& cfg);

std::vector<double> default_lambda_grid();  // 0.00, 0.15, ..., 0.90, 1.00

}  // namespace qrbf
