#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "pfrontier/market_data.hpp"
#include "pfrontier/types.hpp"

using namespace pfrontier;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / ("pf_md_" + name);
    std::ofstream(p) << content;
    return p;
}

DailyBar bar(const std::string& sym, const std::string& date, double o, double h,
             double l, double c) {
    return {sym, parse_date(date), o, h, l, c};
}

}  // namespace

TEST_CASE("date roundtrip and ordering") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<std::int64_t> days(-40000, 40000);
    for (int i = 0; i < 2000; ++i) {
        std::int64_t d = days(rng);
        CHECK(to_days(from_days(d)) == d);
    }
    CHECK(to_days(Date{1970, 1, 1}) == 0);
    CHECK(Date{2014, 2, 3} < Date{2014, 2, 4});
    CHECK(Date{2013, 12, 31} < Date{2014, 1, 1});
}

TEST_CASE("iso week known values") {
    CHECK(iso_weekday(Date{2014, 1, 6}) == 1);  // Monday
    CHECK(iso_week(Date{2014, 1, 6}) == IsoWeek{2014, 2});
    CHECK(iso_week(Date{2015, 12, 28}) == IsoWeek{2015, 53});
    CHECK(iso_week(Date{2016, 1, 3}) == IsoWeek{2015, 53});
    CHECK(iso_week(Date{2016, 1, 4}) == IsoWeek{2016, 1});
    CHECK(iso_week(Date{1977, 1, 1}) == IsoWeek{1976, 53});
}

TEST_CASE("parse_date") {
    CHECK(parse_date("2014-07-09") == Date{2014, 7, 9});
    CHECK_THROWS_AS(parse_date("2014/07/09"), ParseError);
    CHECK_THROWS_AS(parse_date("2014-13-01"), ParseError);
    CHECK_THROWS_AS(parse_date(""), ParseError);
}

TEST_CASE("load_daily_bars parses a headered csv in any column order") {
    auto p = write_temp("ok.csv",
                        "date,close,symbol,open,high,low\n"
                        "2014-01-06,10.5,AAA,10.0,10.6,9.9\n"
                        "# a comment row\n"
                        "2014-01-07,10.7,AAA,10.5,10.8,10.4\n");
    auto bars = load_daily_bars(p.string());
    REQUIRE(bars.size() == 2);
    CHECK(bars[0].symbol == "AAA");
    CHECK(bars[0].close == doctest::Approx(10.5));
    CHECK(bars[1].date == Date{2014, 1, 7});
}

TEST_CASE("load_daily_bars rejects bad rows") {
    SUBCASE("missing column") {
        auto p = write_temp("nocol.csv", "symbol,date,open,high,close\nA,2014-01-06,1,2,1\n");
        CHECK_THROWS_AS(load_daily_bars(p.string()), ParseError);
    }
    SUBCASE("duplicate symbol-date") {
        auto p = write_temp("dup.csv",
                            "symbol,date,open,high,low,close\n"
                            "A,2014-01-06,10,11,9,10\n"
                            "A,2014-01-06,10,11,9,10\n");
        CHECK_THROWS_AS(load_daily_bars(p.string()), ValidationError);
    }
    SUBCASE("low above high") {
        auto p = write_temp("ohlc.csv",
                            "symbol,date,open,high,low,close\nA,2014-01-06,10,9,11,10\n");
        CHECK_THROWS_AS(load_daily_bars(p.string()), ValidationError);
    }
    SUBCASE("nonpositive price") {
        auto p = write_temp("neg.csv",
                            "symbol,date,open,high,low,close\nA,2014-01-06,10,11,-1,10\n");
        CHECK_THROWS_AS(load_daily_bars(p.string()), ValidationError);
    }
    SUBCASE("unreadable file") {
        CHECK_THROWS_AS(load_daily_bars("/nonexistent/bars.csv"), MissingDataError);
    }
}

TEST_CASE("load_daily_bars header-only file yields empty collection") {
    auto p = write_temp("empty.csv", "symbol,date,open,high,low,close\n");
    CHECK(load_daily_bars(p.string()).empty());
}

TEST_CASE("forward_adjust scales strictly before the event date") {
    std::vector<DailyBar> bars = {
        bar("A", "2014-01-06", 10, 11, 9, 10),
        bar("A", "2014-01-07", 10, 11, 9, 10),
        bar("A", "2014-01-08", 5, 5.5, 4.5, 5),
    };
    auto out = forward_adjust(bars, {{"A", Date{2014, 1, 8}, 0.5}});
    CHECK(out[0].close == doctest::Approx(5.0));
    CHECK(out[1].close == doctest::Approx(5.0));
    CHECK(out[1].low == doctest::Approx(4.5));
    CHECK(out[2].close == doctest::Approx(5.0));  // on/after the event: untouched
}

TEST_CASE("forward_adjust composes multiple events") {
    std::vector<DailyBar> bars = {
        bar("A", "2014-01-06", 8, 8, 8, 8),
        bar("A", "2014-01-07", 4, 4, 4, 4),
        bar("A", "2014-01-08", 2, 2, 2, 2),
    };
    auto out = forward_adjust(bars, {{"A", Date{2014, 1, 7}, 0.5},
                                     {"A", Date{2014, 1, 8}, 0.5}});
    CHECK(out[0].close == doctest::Approx(2.0));
    CHECK(out[1].close == doctest::Approx(2.0));
    CHECK(out[2].close == doctest::Approx(2.0));
}

TEST_CASE("forward_adjust warns on unknown symbols") {
    std::vector<DailyBar> bars = {bar("A", "2014-01-06", 1, 1, 1, 1)};
    std::vector<std::string> warnings;
    auto out = forward_adjust(bars, {{"ZZZ", Date{2014, 1, 7}, 2.0}}, &warnings);
    CHECK(out[0].close == doctest::Approx(1.0));
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("ZZZ") != std::string::npos);
}

TEST_CASE("aggregate_period weekly buckets use closes only") {
    std::vector<DailyBar> bars = {
        bar("A", "2014-01-06", 9.0, 12.0, 8.0, 10.0),   // Mon
        bar("A", "2014-01-08", 10.0, 13.0, 7.0, 11.0),  // Wed: daily extremes ignored
        bar("A", "2014-01-10", 11.0, 11.5, 9.0, 9.5),   // Fri
    };
    auto periods = aggregate_period(bars, Calendar::Weekly);
    REQUIRE(periods.size() == 1);
    const auto& p = periods[0];
    CHECK(p.period.index == 201402);
    CHECK(p.anchor_close == doctest::Approx(10.0));
    CHECK(p.high_close == doctest::Approx(11.0));
    CHECK(p.low_close == doctest::Approx(9.5));
    CHECK(p.last_close == doctest::Approx(9.5));
    CHECK(p.first_date == Date{2014, 1, 6});
    CHECK(p.last_date == Date{2014, 1, 10});
    CHECK(p.up_factor() == doctest::Approx(1.1));
    CHECK(p.down_factor() == doctest::Approx(0.95));
    CHECK(p.period_return() == doctest::Approx(-0.05));
}

TEST_CASE("aggregate_period drops single-day periods") {
    std::vector<DailyBar> bars = {
        bar("A", "2014-01-06", 1, 1, 1, 1),  // lone day in week 2
        bar("A", "2014-01-13", 1, 1, 1, 1),
        bar("A", "2014-01-14", 1, 1, 1, 1),
    };
    auto periods = aggregate_period(bars, Calendar::Weekly);
    REQUIRE(periods.size() == 1);
    CHECK(periods[0].period.index == 201403);
}

TEST_CASE("aggregate_period monthly bucketing") {
    std::vector<DailyBar> bars = {
        bar("A", "2014-01-30", 1, 1, 1, 10),
        bar("A", "2014-01-31", 1, 1, 1, 11),
        bar("A", "2014-02-03", 1, 1, 1, 12),
        bar("A", "2014-02-04", 1, 1, 1, 9),
    };
    auto periods = aggregate_period(bars, Calendar::Monthly);
    REQUIRE(periods.size() == 2);
    CHECK(periods[0].period.index == 201401);
    CHECK(periods[1].period.index == 201402);
    CHECK(periods[1].anchor_close == doctest::Approx(12.0));
    CHECK(periods[1].low_close == doctest::Approx(9.0));
}

TEST_CASE("period_rate picks the latest quote on or before the period start") {
    std::vector<RatePoint> rates = {{Date{2014, 1, 1}, 0.052}, {Date{2014, 1, 8}, 0.104}};
    PeriodBar p;
    p.first_date = Date{2014, 1, 6};
    p.period = {Calendar::Weekly, 201402};
    CHECK(period_rate(rates, p) == doctest::Approx(0.001));
    p.first_date = Date{2014, 1, 8};
    CHECK(period_rate(rates, p) == doctest::Approx(0.002));
    p.period = {Calendar::Monthly, 201401};
    CHECK(period_rate(rates, p) == doctest::Approx(0.104 / 12.0));
}

TEST_CASE("period_rate requires an applicable quote") {
    std::vector<RatePoint> rates = {{Date{2014, 6, 1}, 0.05}};
    PeriodBar p;
    p.first_date = Date{2014, 1, 6};
    p.period = {Calendar::Weekly, 201402};
    CHECK_THROWS_AS(period_rate(rates, p), MissingDataError);
}

TEST_CASE("load_rates and load_factors") {
    auto rp = write_temp("rates.csv",
                         "date,annual_yield\n2014-02-01,0.04\n2014-01-01,0.03\n");
    auto rates = load_rates(rp.string());
    REQUIRE(rates.size() == 2);
    CHECK(rates[0].date == Date{2014, 1, 1});  // sorted on return

    auto fp = write_temp("factors.csv",
                         "month,mkt_rf,smb,hml,rmw,cma,rf\n"
                         "2014-01,0.01,0.002,-0.001,0.0,0.003,0.0025\n");
    auto factors = load_factors(fp.string());
    REQUIRE(factors.size() == 1);
    CHECK(factors[0].month_id == 201401);
    CHECK(factors[0].rf == doctest::Approx(0.0025));
}
