#pragma once

#include <cstdint>
#include <string>

namespace trxcat {

// Calendar date in the proleptic Gregorian calendar.
struct Date {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    auto operator<=>(const Date&) const = default;
};

bool is_valid_date(const Date& d);

// Days since 1970-01-01 (may be negative).
std::int64_t to_day_number(const Date& d);
Date from_day_number(std::int64_t days);

// "YYYY-MM-DD"
std::string format_iso(const Date& d);
Date parse_iso_date(const std::string& text);  // throws Error(schema) on bad input

}  // namespace trxcat
