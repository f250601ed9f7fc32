#include "trxcat/date.hpp"

#include <array>
#include <cstdio>

#include "trxcat/error.hpp"

namespace trxcat {

namespace {

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[static_cast<std::size_t>(m - 1)];
}

}  // namespace

bool is_valid_date(const Date& d) {
    if (d.month < 1 || d.month > 12) return false;
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return false;
    return true;
}

// Civil-date algorithms, era-based (Howard Hinnant's days_from_civil / civil_from_days).
std::int64_t to_day_number(const Date& d) {
    std::int64_t y = d.year;
    if (d.month <= 2) --y;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const std::int64_t yoe = y - era * 400;
    const std::int64_t doy = (153 * (d.month + (d.month > 2 ? -3 : 9)) + 2) / 5 + d.day - 1;
    const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

Date from_day_number(std::int64_t days) {
    std::int64_t z = days + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const std::int64_t doe = z - era * 146097;
    const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = yoe + era * 400;
    const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const std::int64_t mp = (5 * doy + 2) / 153;
    const std::int64_t d = doy - (153 * mp + 2) / 5 + 1;
    const std::int64_t m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2 ? 1 : 0)), static_cast<int>(m), static_cast<int>(d)};
}

std::string format_iso(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

Date parse_iso_date(const std::string& text) {
    int y = 0, m = 0, day = 0;
    char extra = '\0';
    if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c", &y, &m, &day, &extra) != 3 || text.size() != 10) {
        throw_schema("invalid date '" + text + "', expected YYYY-MM-DD");
    }
    Date d{y, m, day};
    if (!is_valid_date(d)) {
        throw_schema("invalid calendar date '" + text + "'");
    }
    return d;
}

}  // namespace trxcat
