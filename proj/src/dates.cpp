#include "qrbf/dates.hpp"

#include <cstdio>

#include "qrbf/errors.hpp"

namespace qrbf {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return kDays[m - 1];
}

}  // namespace

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

// days_from_civil / civil_from_days (Howard Hinnant's algorithms)
long long Date::serial() const {
    const int y = year - (month <= 2);
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

Date Date::from_serial(long long n) {
    n += 719468;
    const long long era = (n >= 0 ? n : n - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(n - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long long y = static_cast<long long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

Date Date::parse(const std::string& iso) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(iso.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3 || m < 1 || m > 12 ||
        d < 1 || d > days_in_month(y, m)) {
        throw DataError("malformed date '" + iso + "' (expected YYYY-MM-DD)");
    }
    return Date{y, m, d};
}

Quarter Quarter::parse(const std::string& label) {
    int y = 0, q = 0;
    char tail = 0;
    if (std::sscanf(label.c_str(), "%dQ%d%c", &y, &q, &tail) != 2 || q < 1 || q > 4) {
        throw ConfigError("malformed quarter label '" + label + "' (expected e.g. 2022Q2)");
    }
    return Quarter{y, q};
}

std::string Quarter::label() const { return std::to_string(year) + "Q" + std::to_string(q); }

Date Quarter::first_day() const { return Date{year, 3 * (q - 1) + 1, 1}; }

Date Quarter::last_day() const {
    const int m = 3 * q;
    return Date{year, m, days_in_month(year, m)};
}

Quarter Quarter::next() const { return q == 4 ? Quarter{year + 1, 1} : Quarter{year, q + 1}; }

}  // namespace qrbf
