#include "pfrontier/types.hpp"

#include <cstdio>

namespace pfrontier {

bool operator<(const Date& a, const Date& b) {
    if (a.year != b.year) return a.year < b.year;
    if (a.month != b.month) return a.month < b.month;
    return a.day < b.day;
}

// Howard Hinnant's civil-date algorithms.
std::int64_t to_days(const Date& dt) {
    std::int64_t y = dt.year;
    unsigned m = static_cast<unsigned>(dt.month);
    unsigned d = static_cast<unsigned>(dt.day);
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                static_cast<int>(d)};
}

int iso_weekday(const Date& d) {
    // 1970-01-01 was a Thursday.
    std::int64_t days = to_days(d);
    int wd = static_cast<int>(((days % 7) + 7 + 3) % 7) + 1;
    return wd;
}

IsoWeek iso_week(const Date& d) {
    // Week of the Thursday belonging to d's week.
    std::int64_t thursday = to_days(d) - (iso_weekday(d) - 4);
    Date th = from_days(thursday);
    std::int64_t jan1 = to_days(Date{th.year, 1, 1});
    int week = static_cast<int>((thursday - jan1) / 7) + 1;
    return IsoWeek{th.year, week};
}

Date parse_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3 ||
        m < 1 || m > 12 || d < 1 || d > 31) {
        throw ParseError("invalid date: '" + s + "' (expected YYYY-MM-DD)");
    }
    return Date{y, m, d};
}

std::string to_string(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

Calendar parse_calendar(const std::string& s) {
    if (s == "weekly") return Calendar::Weekly;
    if (s == "monthly") return Calendar::Monthly;
    throw ParseError("unknown calendar: '" + s + "'");
}

std::string to_string(Calendar c) {
    return c == Calendar::Weekly ? "weekly" : "monthly";
}

PeriodId period_of(const Date& d, Calendar c) {
    if (c == Calendar::Monthly) return {c, d.year * 100 + d.month};
    IsoWeek w = iso_week(d);
    return {c, w.year * 100 + w.week};
}

}  // namespace pfrontier
