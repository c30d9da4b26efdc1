#ifndef PFRONTIER_MARKET_DATA_HPP
#define PFRONTIER_MARKET_DATA_HPP

#include <map>
#include <string>
#include <vector>

#include "pfrontier/types.hpp"

namespace pfrontier {

// ---------------------------------------------------------------------------
// Domain types.
// ---------------------------------------------------------------------------

/// One trading day's forward-adjusted OHLC for one symbol.
struct DailyBar {
    std::string symbol;
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
};

/// Corporate-action scaling event: earlier prices scale by `factor`.
struct AdjustmentEvent {
    std::string symbol;
    Date date;
    double factor = 1.0;  // post-event price / pre-event price, > 0
};

/// One holding period's binomial inputs: anchor S0, high close S0*u,
/// low close S0*d, plus the exit close.
struct PeriodBar {
    std::string symbol;
    PeriodId period;
    double anchor_close = 0.0;  // first trading day's close
    double high_close = 0.0;    // max daily close in the period
    double low_close = 0.0;     // min daily close in the period
    double last_close = 0.0;    // final trading day's close
    Date first_date;
    Date last_date;

    double up_factor() const { return high_close / anchor_close; }
    double down_factor() const { return low_close / anchor_close; }
    double period_return() const { return last_close / anchor_close - 1.0; }
};

struct RatePoint {
    Date date;
    double annual_yield = 0.0;  // fraction per year, > -1
};

struct FactorObservation {
    int month_id = 0;  // year * 100 + month
    double mkt_rf = 0.0;
    double smb = 0.0;
    double hml = 0.0;
    double rmw = 0.0;
    double cma = 0.0;
    double rf = 0.0;
};

/// Column-name map for the daily-bars CSV; defaults match the documented
/// schema `symbol,date,open,high,low,close`.
struct BarSchema {
    std::string symbol = "symbol";
    std::string date = "date";
    std::string open = "open";
    std::string high = "high";
    std::string low = "low";
    std::string close = "close";
};

// ---------------------------------------------------------------------------
// Loading.
// ---------------------------------------------------------------------------

/// Loads bars from a headered CSV. Output is sorted by (symbol, date);
/// duplicate (symbol, date) rows and OHLC invariant violations are rejected.
std::vector<DailyBar> load_daily_bars(const std::string& path,
                                      const BarSchema& schema = {});

/// CSV `symbol,date,factor`.
std::vector<AdjustmentEvent> load_adjustments(const std::string& path);

/// CSV `date,annual_yield`, sorted by date on return.
std::vector<RatePoint> load_rates(const std::string& path);

/// CSV `month,mkt_rf,smb,hml,rmw,cma,rf` with month formatted YYYY-MM.
std::vector<FactorObservation> load_factors(const std::string& path);

// ---------------------------------------------------------------------------
// Transformations.
// ---------------------------------------------------------------------------

/// Scales every bar strictly before each event date by the event factor;
/// multiple events compose multiplicatively. Events for unknown symbols are
/// ignored (a warning is appended to `warnings` when non-null).
std::vector<DailyBar> forward_adjust(std::vector<DailyBar> bars,
                                     const std::vector<AdjustmentEvent>& events,
                                     std::vector<std::string>* warnings = nullptr);

/// Buckets per-symbol daily closes into ISO-week or calendar-month periods.
/// Periods with fewer than 2 trading days are dropped.
std::vector<PeriodBar> aggregate_period(std::vector<DailyBar> bars, Calendar c);

/// Simple per-period rate: latest annual yield on/before the period start,
/// divided by 52 (weekly) or 12 (monthly).
double period_rate(const std::vector<RatePoint>& rates, const PeriodBar& period);

}  // namespace pfrontier

#endif
