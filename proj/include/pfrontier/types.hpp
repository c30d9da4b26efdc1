#ifndef PFRONTIER_TYPES_HPP
#define PFRONTIER_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pfrontier {

// ---------------------------------------------------------------------------
// Errors. Exit-code mapping (see pipeline): input/parse -> 2,
// empty/insufficient data -> 3, internal invariant violation -> 4.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file or row.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input violates a documented invariant (bad OHLC row, bad weights, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Required inputs are missing (no rate point, unreadable file).
class MissingDataError : public Error {
public:
    using Error::Error;
};

/// Operation called outside its domain (empty cross-section, v <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Risk-neutral estimation cannot proceed (u == d).
class EstimationError : public Error {
public:
    using Error::Error;
};

/// Internal consistency check failed; indicates an upstream data defect.
class InternalError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Calendar dates (proleptic Gregorian).
// ---------------------------------------------------------------------------

struct Date {
    int year = 0;
    int month = 0;  // 1..12
    int day = 0;    // 1..31

    friend bool operator==(const Date&, const Date&) = default;
};

bool operator<(const Date& a, const Date& b);
inline bool operator>(const Date& a, const Date& b) { return b < a; }
inline bool operator<=(const Date& a, const Date& b) { return !(b < a); }
inline bool operator>=(const Date& a, const Date& b) { return !(a < b); }

/// Days since 1970-01-01 (negative before).
std::int64_t to_days(const Date& d);
Date from_days(std::int64_t days);

/// ISO weekday, 1 = Monday .. 7 = Sunday.
int iso_weekday(const Date& d);

struct IsoWeek {
    int year = 0;
    int week = 0;  // 1..53
    friend bool operator==(const IsoWeek&, const IsoWeek&) = default;
};

IsoWeek iso_week(const Date& d);

/// Parses "YYYY-MM-DD"; throws ParseError otherwise.
Date parse_date(const std::string& s);
std::string to_string(const Date& d);

// ---------------------------------------------------------------------------
// Periods.
// ---------------------------------------------------------------------------

enum class Calendar { Weekly, Monthly };

Calendar parse_calendar(const std::string& s);
std::string to_string(Calendar c);

struct PeriodId {
    Calendar calendar = Calendar::Weekly;
    // Weekly: iso_year * 100 + iso_week.  Monthly: year * 100 + month.
    int index = 0;

    friend bool operator==(const PeriodId&, const PeriodId&) = default;
    friend bool operator<(const PeriodId& a, const PeriodId& b) {
        return a.index < b.index;
    }
};

/// Period id of the calendar bucket containing `d`.
PeriodId period_of(const Date& d, Calendar c);

}  // namespace pfrontier

#endif
