#pragma once

#include <compare>
#include <string>

namespace qrbf {

// Minimal proleptic-Gregorian calendar date.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    std::string to_string() const;        // ISO-8601 YYYY-MM-DD
    long long serial() const;             // days since 1970-01-01
    static Date from_serial(long long n);
    static Date parse(const std::string& iso);  // throws DataError on malformed input

    Date plus_days(long long n) const { return from_serial(serial() + n); }
};

struct Quarter {
    int year = 0;
    int q = 0;  // 1..4

    static Quarter parse(const std::string& label);  // "2022Q2"; throws ConfigError
    std::string label() const;
    Date first_day() const;
    Date last_day() const;
    Quarter next() const;

    auto operator<=>(const Quarter&) const = default;
};

}  // namespace qrbf
