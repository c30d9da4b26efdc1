#include "pfrontier/synth.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace pfrontier {

namespace {

std::string stock_name(size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "S%03zu", i);
    return buf;
}

// Mon..Fri trading calendar. Weekly panels start on Monday 2014-01-06.
std::vector<Date> trading_days(Calendar calendar, size_t n_periods) {
    std::vector<Date> days;
    if (calendar == Calendar::Weekly) {
        std::int64_t monday = to_days(Date{2014, 1, 6});
        for (size_t w = 0; w < n_periods; ++w)
            for (int k = 0; k < 5; ++k)
                days.push_back(from_days(monday + static_cast<std::int64_t>(w) * 7 + k));
    } else {
        int year = 2014, month = 1;
        for (size_t m = 0; m < n_periods; ++m) {
            Date d{year, month, 1};
            while (d.month == month) {
                if (iso_weekday(d) <= 5) days.push_back(d);
                d = from_days(to_days(d) + 1);
            }
            if (++month > 12) {
                month = 1;
                ++year;
            }
        }
    }
    return days;
}

double parse_double(const std::map<std::string, std::string>& kv, const std::string& key,
                    double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stod(it->second);
}

}  // namespace

SynthRegime parse_regime(const std::map<std::string, std::string>& kv) {
    SynthRegime r;
    auto cal = kv.find("calendar");
    if (cal != kv.end()) r.calendar = parse_calendar(cal->second);
    r.daily_drift = parse_double(kv, "daily_drift", r.daily_drift);
    r.daily_vol = parse_double(kv, "daily_vol", r.daily_vol);
    r.intraday_range = parse_double(kv, "intraday_range", r.intraday_range);
    r.annual_rate = parse_double(kv, "annual_rate", r.annual_rate);
    r.lambda_mkt = parse_double(kv, "lambda_mkt", r.lambda_mkt);
    r.factor_vol = parse_double(kv, "factor_vol", r.factor_vol);
    return r;
}

SyntheticPanel generate_synthetic_panel(std::uint64_t seed, std::size_t n_stocks,
                                        std::size_t n_periods, const SynthRegime& regime) {
    if (n_stocks < 2 || n_periods < 2)
        throw DomainError("generate_synthetic_panel requires n_stocks >= 2 and n_periods >= 2");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    SyntheticPanel panel;
    panel.truth.lambda_mkt = regime.lambda_mkt;
    panel.truth.annual_rate = regime.annual_rate;

    std::vector<Date> days = trading_days(regime.calendar, n_periods);

    std::vector<std::string> symbols = {panel.index_symbol};
    for (size_t i = 0; i < n_stocks; ++i) symbols.push_back(stock_name(i));

    for (const auto& symbol : symbols) {
        bool is_index = symbol == panel.index_symbol;
        double vol = is_index ? regime.daily_vol * 0.5 : regime.daily_vol;
        double drift = is_index ? regime.daily_drift
                                : regime.daily_drift * (0.5 + uniform(rng));
        if (!is_index) panel.truth.stock_drift[symbol] = drift;
        double close = is_index ? 3000.0 : 10.0 + 40.0 * uniform(rng);
        double prev_close = close;
        for (const auto& date : days) {
            // Zero volatility pins the closes so periods degenerate to
            // high = low = anchor.
            if (regime.daily_vol > 0.0)
                close = prev_close * std::exp(drift + vol * normal(rng));
            DailyBar b;
            b.symbol = symbol;
            b.date = date;
            b.open = prev_close;
            b.close = close;
            double span = regime.daily_vol > 0.0 ? regime.intraday_range * uniform(rng) : 0.0;
            b.high = std::max(b.open, b.close) * (1.0 + span);
            b.low = std::min(b.open, b.close) * (1.0 - span);
            panel.bars.push_back(std::move(b));
            prev_close = close;
        }
    }

    panel.rates.push_back(RatePoint{Date{2014, 1, 1}, regime.annual_rate});

    // Monthly factor observations spanning the generated dates.
    int first_month = days.front().year * 100 + days.front().month;
    int last_month = days.back().year * 100 + days.back().month;
    for (int m = first_month; m <= last_month;) {
        FactorObservation f;
        f.month_id = m;
        f.mkt_rf = regime.lambda_mkt + regime.factor_vol * normal(rng);
        f.smb = 0.5 * regime.factor_vol * normal(rng);
        f.hml = 0.5 * regime.factor_vol * normal(rng);
        f.rmw = 0.5 * regime.factor_vol * normal(rng);
        f.cma = 0.5 * regime.factor_vol * normal(rng);
        f.rf = regime.annual_rate / 12.0;
        panel.factors.push_back(f);
        m = m % 100 == 12 ? m + 100 - 11 : m + 1;
    }
    return panel;
}

FactorEconomy generate_factor_economy(std::uint64_t seed, std::size_t n_stocks,
                                      std::size_t n_months,
                                      const std::array<double, 6>& lambda,
                                      double noise_sd) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    FactorEconomy eco;
    eco.truth.lambda = lambda;

    std::vector<int> months;
    {
        int m = 201401;
        for (size_t i = 0; i < n_months; ++i) {
            months.push_back(m);
            m = m % 100 == 12 ? m + 100 - 11 : m + 1;
        }
    }
    eco.panel.months = months;

    std::vector<std::string> symbols;
    for (size_t i = 0; i < n_stocks; ++i) symbols.push_back(stock_name(i));
    for (const auto& s : symbols) {
        std::array<double, 6> b{};
        b[0] = 0.5 + uniform(rng);  // characteristic loading
        b[1] = 0.5 + uniform(rng);  // market
        for (int j = 2; j < 6; ++j) b[static_cast<size_t>(j)] = 2.0 * uniform(rng) - 1.0;
        eco.truth.loadings[s] = b;
    }

    for (int m : months) {
        double common_v = lambda[0] + 0.01 * normal(rng);
        std::array<double, 5> f{};
        for (int j = 0; j < 5; ++j)
            f[static_cast<size_t>(j)] = lambda[static_cast<size_t>(j) + 1] + 0.02 * normal(rng);
        FactorObservation obs;
        obs.month_id = m;
        obs.mkt_rf = f[0];
        obs.smb = f[1];
        obs.hml = f[2];
        obs.rmw = f[3];
        obs.cma = f[4];
        obs.rf = 0.0;
        eco.panel.factors[m] = obs;

        for (const auto& s : symbols) {
            const auto& b = eco.truth.loadings.at(s);
            double v = common_v + 0.001 * normal(rng);
            double re = b[0] * v;
            for (int j = 0; j < 5; ++j) re += b[static_cast<size_t>(j) + 1] * f[static_cast<size_t>(j)];
            re += noise_sd * normal(rng);
            eco.panel.characteristic[s][m] = v;
            eco.panel.excess_returns[s][m] = re;
        }
    }
    return eco;
}

}  // namespace pfrontier
