#include "qrbf/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qrbf/errors.hpp"

namespace qrbf {

namespace {

constexpr int kTrainWeeks = 52;
constexpr double kWeeksPerYear = 52.0;

std::vector<std::size_t> weeks_in_span(const ReturnsTable& table, const Date& start,
                                       const Date& end) {
    std::vector<std::size_t> idx;
    for (std::size_t w = 0; w < table.num_weeks(); ++w) {
        if (table.dates[w] >= start && table.dates[w] <= end) idx.push_back(w);
    }
    return idx;
}

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::uint64_t window_seed(std::uint64_t base, const std::string& label) {
    // FNV-1a over the label, mixed with the base seed: one model per window
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return base ^ h;
}

std::vector<RollingWindow> make_rolling_windows(const std::string& first_test_quarter,
                                                const std::string& last_test_quarter) {
    const Quarter first = Quarter::parse(first_test_quarter);
    const Quarter last = Quarter::parse(last_test_quarter);
    if (first > last) {
        throw ConfigError("window range is reversed: " + first_test_quarter + " > " +
                          last_test_quarter);
    }
    std::vector<RollingWindow> windows;
    for (Quarter q = first;; q = q.next()) {
        RollingWindow w;
        w.label = q.label();
        w.test_start = q.first_day();
        w.test_end = q.last_day();
        w.train_start = w.test_start.plus_days(-7LL * kTrainWeeks);
        w.train_end = w.test_start.plus_days(-1);
        windows.push_back(std::move(w));
        if (q == last) break;
    }
    return windows;
}

PeriodWeights compute_period_weights(const RollingWindow& window, const ReturnsTable& table,
                                     const PipelineConfig& cfg) {
    cfg.validate();
    // train span: the 52 weekly observations immediately preceding the test quarter
    std::vector<std::size_t> before;
    for (std::size_t w = 0; w < table.num_weeks(); ++w) {
        if (table.dates[w] < window.test_start) before.push_back(w);
    }
    if (before.size() < kTrainWeeks) {
        throw DataError("window " + window.label + ": only " + std::to_string(before.size()) +
                        " weeks precede the test span, need " + std::to_string(kTrainWeeks));
    }
    const std::vector<std::size_t> train(before.end() - kTrainWeeks, before.end());

    std::vector<ReturnSequence> sequences(table.num_entities());
    std::vector<std::vector<double>> train_series(table.num_entities());
    for (std::size_t e = 0; e < table.num_entities(); ++e) {
        sequences[e].entity_id = table.entities[e];
        for (std::size_t w : train) sequences[e].values.push_back(table.returns[w][e]);
        train_series[e] = sequences[e].values;
    }

    TrainConfig tc = cfg.train;
    tc.seed = window_seed(cfg.train.seed, window.label);
    TrainResult trained = train_autoencoder(sequences, tc, cfg.mode, cfg.exec);

    PeriodWeights out;
    out.loss_history = std::move(trained.loss_history);
    out.embeddings = embed_all(trained.model, sequences, window.label, cfg.exec);
    if (table.num_entities() == 1) {
        // no pairwise distances to take a median over; the only portfolio is
        // the single entity itself
        out.kernel = KernelMatrix{1, {1.0}, 0.0};
    } else {
        out.kernel = rbf_kernel(out.embeddings, cfg.exec);
    }
    out.momentum = momentum_scores(table.entities, train_series);

    DivMomConfig dm = cfg.divmom;
    dm.k = std::min<int>(dm.k, static_cast<int>(table.num_entities()));
    out.divmom = divmom_select(out.momentum, out.kernel, dm);
    GraphResult gr = graph_allocate(out.momentum, out.kernel, cfg.graph);
    out.graph = std::move(gr.weights);
    out.graph_converged = gr.converged;
    return out;
}

PeriodResult run_period(const RollingWindow& window, const ReturnsTable& table,
                        const PipelineConfig& cfg) {
    PeriodResult result;
    result.label = window.label;
    result.weights = compute_period_weights(window, table, cfg);

    const std::vector<std::size_t> test = weeks_in_span(table, window.test_start, window.test_end);
    if (test.empty()) {
        throw DataError("window " + window.label + ": no weekly data in test span " +
                        window.test_start.to_string() + " .. " + window.test_end.to_string());
    }
    const std::size_t n = table.num_entities();
    for (std::size_t w : test) {
        result.test_dates.push_back(table.dates[w]);
        double dm = 0.0, gr = 0.0, bench = 0.0;
        for (std::size_t e = 0; e < n; ++e) {
            const double r = table.returns[w][e];
            dm += result.weights.divmom.weights[e] * r;
            gr += result.weights.graph.weights[e] * r;
            bench += r;
        }
        result.divmom_returns.push_back(dm);
        result.graph_returns.push_back(gr);
        result.benchmark_returns.push_back(bench / static_cast<double>(n));
    }
    return result;
}

std::vector<double> chain_equity(const std::vector<std::vector<double>>& period_returns) {
    std::vector<double> values;
    double equity = 1.0;
    for (const auto& period : period_returns) {
        for (double r : period) {
            if (r <= -1.0 || !std::isfinite(r)) {
                throw DataError("invalid weekly return " + std::to_string(r));
            }
            equity *= 1.0 + r;
            values.push_back(equity);
        }
    }
    return values;
}

MetricsRow compute_metrics(const std::vector<double>& weekly_returns,
                           const std::vector<double>& benchmark_weekly_returns) {
    const std::size_t T = weekly_returns.size();
    if (T != benchmark_weekly_returns.size() || T < 2) {
        throw DataError("compute_metrics: aligned series of length >= 2 required");
    }
    std::vector<double> excess(T);
    for (std::size_t j = 0; j < T; ++j) excess[j] = weekly_returns[j] - benchmark_weekly_returns[j];

    MetricsRow row;
    double growth = 1.0;
    for (double e : excess) growth *= 1.0 + e;
    row.cagr = std::pow(growth, kWeeksPerYear / static_cast<double>(T)) - 1.0;

    const double mu = mean(excess);
    double ss = 0.0;
    for (double e : excess) ss += (e - mu) * (e - mu);
    const double stdev = std::sqrt(ss / static_cast<double>(T - 1));
    row.vol = stdev * std::sqrt(kWeeksPerYear);

    if (row.vol > 0.0) {
        row.sharpe = mu * kWeeksPerYear / row.vol;
    } else {
        row.sharpe = 0.0;
        row.degenerate_vol = true;
    }

    double equity = 1.0, peak = 1.0, mdd = 0.0;
    for (double e : excess) {
        equity *= 1.0 + e;
        peak = std::max(peak, equity);
        mdd = std::min(mdd, equity / peak - 1.0);
    }
    row.max_dd = mdd;
    return row;
}

BacktestResult run_backtest(const std::vector<RollingWindow>& windows, const ReturnsTable& table,
                            const PipelineConfig& cfg) {
    if (windows.empty()) throw ConfigError("no rolling windows");
    BacktestResult result;
    result.periods.reserve(windows.size());
    for (const RollingWindow& w : windows) result.periods.push_back(run_period(w, table, cfg));

    std::vector<std::vector<double>> dm, gr, bench;
    for (const PeriodResult& p : result.periods) {
        result.divmom_metrics.push_back(compute_metrics(p.divmom_returns, p.benchmark_returns));
        result.graph_metrics.push_back(compute_metrics(p.graph_returns, p.benchmark_returns));
        result.benchmark_metrics.push_back(
            compute_metrics(p.benchmark_returns, p.benchmark_returns));
        dm.push_back(p.divmom_returns);
        gr.push_back(p.graph_returns);
        bench.push_back(p.benchmark_returns);
        result.equity_dates.insert(result.equity_dates.end(), p.test_dates.begin(),
                                   p.test_dates.end());
    }
    result.divmom_equity = chain_equity(dm);
    result.graph_equity = chain_equity(gr);
    result.benchmark_equity = chain_equity(bench);
    return result;
}

GridSearchResult grid_search_lambda(const std::vector<double>& lambda_grid,
                                    const std::vector<RollingWindow>& windows,
                                    const ReturnsTable& table, const PipelineConfig& cfg) {
    if (lambda_grid.empty()) throw ConfigError("empty lambda grid");
    if (windows.empty()) throw ConfigError("no rolling windows");

    // training and the kernel do not depend on lambda: cache per window
    struct WindowCache {
        PeriodWeights weights;
        std::vector<std::size_t> test_weeks;
        std::vector<double> benchmark;
    };
    std::vector<WindowCache> cache;
    for (const RollingWindow& w : windows) {
        WindowCache c;
        c.weights = compute_period_weights(w, table, cfg);
        c.test_weeks = weeks_in_span(table, w.test_start, w.test_end);
        if (c.test_weeks.empty())
            throw DataError("window " + w.label + ": no weekly data in test span");
        for (std::size_t wk : c.test_weeks) {
            double b = 0.0;
            for (std::size_t e = 0; e < table.num_entities(); ++e) b += table.returns[wk][e];
            c.benchmark.push_back(b / static_cast<double>(table.num_entities()));
        }
        cache.push_back(std::move(c));
    }

    auto portfolio_returns = [&](const PortfolioWeights& weights, const WindowCache& c) {
        std::vector<double> r;
        for (std::size_t wk : c.test_weeks) {
            double acc = 0.0;
            for (std::size_t e = 0; e < table.num_entities(); ++e)
                acc += weights.weights[e] * table.returns[wk][e];
            r.push_back(acc);
        }
        return r;
    };

    GridSearchResult result;
    {
        std::vector<double> sharpes;
        std::vector<std::vector<double>> all_returns;
        for (const WindowCache& c : cache) {
            const auto r = portfolio_returns(c.weights.graph, c);
            sharpes.push_back(compute_metrics(r, c.benchmark).sharpe);
            all_returns.push_back(r);
        }
        result.graph_mean_sharpe = mean(sharpes);
        result.graph_final_net_value = chain_equity(all_returns).back();
    }

    for (double lambda : lambda_grid) {
        DivMomConfig dm = cfg.divmom;
        dm.lambda = lambda;
        std::vector<double> sharpes;
        std::vector<std::vector<double>> all_returns;
        for (const WindowCache& c : cache) {
            DivMomConfig local = dm;
            local.k = std::min<int>(local.k, static_cast<int>(table.num_entities()));
            const PortfolioWeights w =
                divmom_select(c.weights.momentum, c.weights.kernel, local);
            const auto r = portfolio_returns(w, c);
            sharpes.push_back(compute_metrics(r, c.benchmark).sharpe);
            all_returns.push_back(r);
        }
        GridSearchRow row;
        row.lambda = lambda;
        row.mean_sharpe = mean(sharpes);
        row.gap_to_graph = result.graph_mean_sharpe - row.mean_sharpe;
        row.final_net_value = chain_equity(all_returns).back();
        result.rows.push_back(row);
    }
    return result;
}

std::vector<double> default_lambda_grid() {
    return {0.00, 0.15, 0.30, 0.45, 0.60, 0.75, 0.90, 1.00};
}

}  // namespace qrbf
