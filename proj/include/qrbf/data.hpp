#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qrbf/dates.hpp"
#include "qrbf/recurrent.hpp"

namespace qrbf {

// Wide panel of weekly simple returns. Dates strictly increasing with 6-8
// day spacing; no missing cells (incomplete entities are dropped at load).
struct ReturnsTable {
    std::vector<Date> dates;
    std::vector<std::string> entities;
    std::vector<std::vector<double>> returns;  // [week][entity]

    std::size_t num_weeks() const { return dates.size(); }
    std::size_t num_entities() const { return entities.size(); }
};

using SectorMap = std::map<std::string, std::string>;

struct SyntheticConfig {
    int num_sectors = 2;
    int entities_per_sector = 20;
    int num_weeks = 117;
    double factor_vol = 0.02;
    double factor_persistence = 0.9;  // AR(1) coefficient of each sector factor
    double idio_vol = 0.005;
    double momentum_drift = 0.002;
    double beta_min = 0.8;
    double beta_max = 1.2;
    std::uint64_t seed = 42;
    Date start_date{2021, 4, 2};  // weekly Fridays from here

    void validate() const;
};

// Long CSV `date,ticker,return` -> wide table. Entities missing any week of
// the table span are dropped; their names are appended to `warnings` when
// given.
ReturnsTable load_returns_csv(const std::string& path,
                              std::vector<std::string>* warnings = nullptr);

void write_returns_csv(const ReturnsTable& table, const std::string& path);

SectorMap load_sectors_csv(const std::string& path);
void write_sectors_csv(const SectorMap& sectors, const std::string& path);

// One sequence per entity over the weeks in [start, end] inclusive.
std::vector<ReturnSequence> build_sequences(const ReturnsTable& table, const Date& start,
                                            const Date& end);

// r_it = beta_i * f_{s(i),t} + eps_it + drift_{s(i)} with one Gaussian AR(1)
// factor per sector (stationary stdev factor_vol), beta_i in
// [beta_min, beta_max], and drift decreasing with sector index so the momentum
// ordering is planted. Fully reproducible from the seed.
std::pair<ReturnsTable, SectorMap> generate_synthetic_universe(const SyntheticConfig& cfg);

}  // namespace qrbf
