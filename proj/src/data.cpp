#include "qrbf/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "qrbf/errors.hpp"

namespace qrbf {

namespace {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void check_spacing(const std::vector<Date>& dates) {
    for (std::size_t i = 1; i < dates.size(); ++i) {
        const long long gap = dates[i].serial() - dates[i - 1].serial();
        if (gap < 6 || gap > 8) {
            throw DataError("non-weekly date spacing: " + dates[i - 1].to_string() + " -> " +
                            dates[i].to_string() + " (" + std::to_string(gap) + " days)");
        }
    }
}

}  // namespace

void SyntheticConfig::validate() const {
    if (num_sectors < 1) throw ConfigError("num_sectors must be positive");
    if (entities_per_sector < 1) throw ConfigError("entities_per_sector must be positive");
    if (num_weeks < 1) throw ConfigError("num_weeks must be positive");
    if (!(factor_vol > 0.0)) throw ConfigError("factor_vol must be positive");
    if (!(factor_persistence >= 0.0 && factor_persistence < 1.0))
        throw ConfigError("factor_persistence must lie in [0, 1)");
    if (!(idio_vol >= 0.0)) throw ConfigError("idio_vol must be nonnegative");
    if (!(beta_min <= beta_max)) throw ConfigError("beta_min must not exceed beta_max");
}

ReturnsTable load_returns_csv(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open returns file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "date,ticker,return") {
        throw DataError("'" + path + "': expected header 'date,ticker,return'");
    }

    std::map<Date, std::map<std::string, double>> cells;
    std::vector<std::string> order;  // first-appearance entity order
    std::set<std::string> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string date_str, ticker, value_str;
        if (!std::getline(row, date_str, ',') || !std::getline(row, ticker, ',') ||
            !std::getline(row, value_str)) {
            throw DataError("'" + path + "' line " + std::to_string(line_no) + ": malformed row");
        }
        const Date date = Date::parse(date_str);
        double value = 0.0;
        try {
            std::size_t pos = 0;
            value = std::stod(value_str, &pos);
            if (pos != value_str.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw DataError("'" + path + "' line " + std::to_string(line_no) +
                            ": bad return value '" + value_str + "'");
        }
        if (value <= -1.0) {
            throw DataError("'" + path + "' line " + std::to_string(line_no) + ": return " +
                            value_str + " <= -1");
        }
        cells[date][ticker] = value;
        if (seen.insert(ticker).second) order.push_back(ticker);
    }
    if (cells.empty()) throw DataError("'" + path + "': no data rows");

    ReturnsTable table;
    for (const auto& [date, _] : cells) table.dates.push_back(date);
    check_spacing(table.dates);

    for (const std::string& ticker : order) {
        bool complete = true;
        for (const auto& [date, row] : cells) {
            if (!row.count(ticker)) {
                complete = false;
                break;
            }
        }
        if (complete) {
            table.entities.push_back(ticker);
        } else if (warnings) {
            warnings->push_back("dropping '" + ticker + "': missing weeks in span");
        }
    }
    if (table.entities.empty()) throw DataError("'" + path + "': no complete entities");

    table.returns.assign(table.dates.size(), std::vector<double>(table.entities.size(), 0.0));
    std::size_t w = 0;
    for (const auto& [date, row] : cells) {
        for (std::size_t e = 0; e < table.entities.size(); ++e)
            table.returns[w][e] = row.at(table.entities[e]);
        ++w;
    }
    return table;
}

void write_returns_csv(const ReturnsTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "date,ticker,return\n";
    for (std::size_t w = 0; w < table.num_weeks(); ++w) {
        const std::string date = table.dates[w].to_string();
        for (std::size_t e = 0; e < table.num_entities(); ++e) {
            out << date << ',' << table.entities[e] << ',' << format_value(table.returns[w][e])
                << '\n';
        }
    }
}

SectorMap load_sectors_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open sectors file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "ticker,sector") {
        throw DataError("'" + path + "': expected header 'ticker,sector'");
    }
    SectorMap sectors;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || comma == 0 || comma + 1 == line.size()) {
            throw DataError("'" + path + "' line " + std::to_string(line_no) + ": malformed row");
        }
        sectors[line.substr(0, comma)] = line.substr(comma + 1);
    }
    return sectors;
}

void write_sectors_csv(const SectorMap& sectors, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "ticker,sector\n";
    for (const auto& [ticker, sector] : sectors) out << ticker << ',' << sector << '\n';
}

std::vector<ReturnSequence> build_sequences(const ReturnsTable& table, const Date& start,
                                            const Date& end) {
    std::vector<std::size_t> weeks;
    for (std::size_t w = 0; w < table.num_weeks(); ++w) {
        if (table.dates[w] >= start && table.dates[w] <= end) weeks.push_back(w);
    }
    if (weeks.empty()) {
        throw DataError("no weeks in span " + start.to_string() + " .. " + end.to_string());
    }
    std::vector<ReturnSequence> sequences(table.num_entities());
    for (std::size_t e = 0; e < table.num_entities(); ++e) {
        sequences[e].entity_id = table.entities[e];
        sequences[e].values.reserve(weeks.size());
        for (std::size_t w : weeks) sequences[e].values.push_back(table.returns[w][e]);
    }
    return sequences;
}

std::pair<ReturnsTable, SectorMap> generate_synthetic_universe(const SyntheticConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    auto gauss = [&rng](double stdev) {
        if (stdev == 0.0) return 0.0;
        // Box-Muller on raw 53-bit draws; stable across standard libraries.
        double u1 = 0.0;
        while (u1 == 0.0) u1 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return stdev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    };
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };

    const int S = cfg.num_sectors;
    const int E = cfg.entities_per_sector;
    const int W = cfg.num_weeks;

    // per-sector AR(1) factor paths with stationary stdev factor_vol
    const double rho = cfg.factor_persistence;
    const double innov_vol = cfg.factor_vol * std::sqrt(1.0 - rho * rho);
    std::vector<std::vector<double>> factors(static_cast<std::size_t>(S),
                                             std::vector<double>(static_cast<std::size_t>(W)));
    for (int s = 0; s < S; ++s) {
        auto& path = factors[static_cast<std::size_t>(s)];
        path[0] = gauss(cfg.factor_vol);
        for (int w = 1; w < W; ++w)
            path[static_cast<std::size_t>(w)] =
                rho * path[static_cast<std::size_t>(w - 1)] + gauss(innov_vol);
    }

    std::vector<double> betas(static_cast<std::size_t>(S * E));
    for (auto& b : betas) b = uniform(cfg.beta_min, cfg.beta_max);

    // drift decreases with sector index; sector 0 has the strongest momentum
    std::vector<double> drift(static_cast<std::size_t>(S), cfg.momentum_drift);
    if (S > 1) {
        for (int s = 0; s < S; ++s)
            drift[static_cast<std::size_t>(s)] =
                cfg.momentum_drift * static_cast<double>(S - 1 - s) / (S - 1);
    }

    ReturnsTable table;
    table.dates.resize(static_cast<std::size_t>(W));
    for (int w = 0; w < W; ++w)
        table.dates[static_cast<std::size_t>(w)] = cfg.start_date.plus_days(7LL * w);

    SectorMap sectors;
    for (int s = 0; s < S; ++s) {
        for (int e = 0; e < E; ++e) {
            char name[32];
            std::snprintf(name, sizeof name, "S%dN%02d", s, e);
            table.entities.emplace_back(name);
            sectors[name] = "SECTOR_" + std::to_string(s);
        }
    }

    table.returns.assign(static_cast<std::size_t>(W),
                         std::vector<double>(table.entities.size(), 0.0));
    for (int s = 0; s < S; ++s) {
        for (int e = 0; e < E; ++e) {
            const std::size_t idx = static_cast<std::size_t>(s * E + e);
            for (int w = 0; w < W; ++w) {
                table.returns[static_cast<std::size_t>(w)][idx] =
                    betas[idx] * factors[static_cast<std::size_t>(s)][static_cast<std::size_t>(w)] +
                    gauss(cfg.idio_vol) + drift[static_cast<std::size_t>(s)];
            }
        }
    }
    return {std::move(table), std::move(sectors)};
}

}  // namespace qrbf
