#include "pfrontier/market_data.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace pfrontier {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, const std::string& what, size_t line_no) {
    char* end = nullptr;
    std::string t = strip(s);
    double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what +
                         " value '" + s + "'");
    }
    return v;
}

struct CsvReader {
    std::ifstream in;
    std::string path;
    size_t line_no = 0;
    std::vector<std::string> header;

    explicit CsvReader(const std::string& p) : in(p), path(p) {
        if (!in) throw MissingDataError("cannot open file: " + p);
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            std::string s = strip(line);
            if (s.empty() || s[0] == '#') continue;
            for (auto& h : split_csv(line)) header.push_back(strip(h));
            break;
        }
    }

    size_t column(const std::string& name) const {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw ParseError(path + ": missing column '" + name + "'");
    }

    bool next(std::vector<std::string>& fields) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            std::string s = strip(line);
            if (s.empty() || s[0] == '#') continue;
            fields = split_csv(line);
            if (fields.size() < header.size()) {
                throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
            }
            return true;
        }
        return false;
    }
};

void validate_bar(const DailyBar& b, size_t line_no) {
    std::string where = line_no ? "line " + std::to_string(line_no) + ": " : "";
    if (b.low <= 0.0) {
        throw ValidationError(where + b.symbol + " " + to_string(b.date) +
                              ": low must be positive, got " + std::to_string(b.low));
    }
    if (b.low > std::min(b.open, b.close) || b.high < std::max(b.open, b.close)) {
        throw ValidationError(where + b.symbol + " " + to_string(b.date) +
                              ": OHLC invariant violated (o=" + std::to_string(b.open) +
                              " h=" + std::to_string(b.high) + " l=" + std::to_string(b.low) +
                              " c=" + std::to_string(b.close) + ")");
    }
}

}  // namespace

std::vector<DailyBar> load_daily_bars(const std::string& path, const BarSchema& schema) {
    CsvReader r(path);
    if (r.header.empty()) return {};
    size_t c_sym = r.column(schema.symbol), c_date = r.column(schema.date);
    size_t c_open = r.column(schema.open), c_high = r.column(schema.high);
    size_t c_low = r.column(schema.low), c_close = r.column(schema.close);

    std::vector<DailyBar> bars;
    std::vector<std::string> f;
    while (r.next(f)) {
        DailyBar b;
        b.symbol = strip(f[c_sym]);
        if (b.symbol.empty())
            throw ParseError("line " + std::to_string(r.line_no) + ": empty symbol");
        try {
            b.date = parse_date(strip(f[c_date]));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(r.line_no) + ": " + e.what());
        }
        b.open = parse_number(f[c_open], "open", r.line_no);
        b.high = parse_number(f[c_high], "high", r.line_no);
        b.low = parse_number(f[c_low], "low", r.line_no);
        b.close = parse_number(f[c_close], "close", r.line_no);
        validate_bar(b, r.line_no);
        bars.push_back(std::move(b));
    }

    std::stable_sort(bars.begin(), bars.end(), [](const DailyBar& a, const DailyBar& b) {
        if (a.symbol != b.symbol) return a.symbol < b.symbol;
        return a.date < b.date;
    });
    for (size_t i = 1; i < bars.size(); ++i) {
        if (bars[i].symbol == bars[i - 1].symbol && bars[i].date == bars[i - 1].date) {
            throw ValidationError("duplicate bar for " + bars[i].symbol + " on " +
                                  to_string(bars[i].date));
        }
    }
    return bars;
}

std::vector<AdjustmentEvent> load_adjustments(const std::string& path) {
    CsvReader r(path);
    if (r.header.empty()) return {};
    size_t c_sym = r.column("symbol"), c_date = r.column("date"), c_f = r.column("factor");
    std::vector<AdjustmentEvent> out;
    std::vector<std::string> f;
    while (r.next(f)) {
        AdjustmentEvent e;
        e.symbol = strip(f[c_sym]);
        e.date = parse_date(strip(f[c_date]));
        e.factor = parse_number(f[c_f], "factor", r.line_no);
        if (e.factor <= 0.0)
            throw ValidationError("line " + std::to_string(r.line_no) +
                                  ": adjustment factor must be positive");
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<RatePoint> load_rates(const std::string& path) {
    CsvReader r(path);
    if (r.header.empty()) return {};
    size_t c_date = r.column("date"), c_y = r.column("annual_yield");
    std::vector<RatePoint> out;
    std::vector<std::string> f;
    while (r.next(f)) {
        RatePoint p;
        p.date = parse_date(strip(f[c_date]));
        p.annual_yield = parse_number(f[c_y], "annual_yield", r.line_no);
        if (p.annual_yield <= -1.0)
            throw ValidationError("line " + std::to_string(r.line_no) +
                                  ": annual_yield must exceed -1");
        out.push_back(p);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const RatePoint& a, const RatePoint& b) { return a.date < b.date; });
    return out;
}

std::vector<FactorObservation> load_factors(const std::string& path) {
    CsvReader r(path);
    if (r.header.empty()) return {};
    size_t c_m = r.column("month");
    size_t cols[6] = {r.column("mkt_rf"), r.column("smb"), r.column("hml"),
                      r.column("rmw"), r.column("cma"), r.column("rf")};
    std::vector<FactorObservation> out;
    std::vector<std::string> f;
    while (r.next(f)) {
        FactorObservation o;
        int y = 0, m = 0;
        if (std::sscanf(strip(f[c_m]).c_str(), "%d-%d", &y, &m) != 2 || m < 1 || m > 12)
            throw ParseError("line " + std::to_string(r.line_no) + ": bad month '" +
                             f[c_m] + "' (expected YYYY-MM)");
        o.month_id = y * 100 + m;
        double* dst[6] = {&o.mkt_rf, &o.smb, &o.hml, &o.rmw, &o.cma, &o.rf};
        const char* names[6] = {"mkt_rf", "smb", "hml", "rmw", "cma", "rf"};
        for (int i = 0; i < 6; ++i) *dst[i] = parse_number(f[cols[i]], names[i], r.line_no);
        out.push_back(o);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const FactorObservation& a, const FactorObservation& b) {
                         return a.month_id < b.month_id;
                     });
    return out;
}

std::vector<DailyBar> forward_adjust(std::vector<DailyBar> bars,
                                     const std::vector<AdjustmentEvent>& events,
                                     std::vector<std::string>* warnings) {
    std::unordered_set<std::string> known;
    for (const auto& b : bars) known.insert(b.symbol);

    // Cumulative factor applied to each bar = product of factors of all
    // events of the same symbol dated strictly after the bar.
    for (const auto& e : events) {
        if (!known.count(e.symbol)) {
            if (warnings)
                warnings->push_back("adjustment event for unknown symbol '" + e.symbol +
                                    "' on " + to_string(e.date) + " ignored");
            continue;
        }
        for (auto& b : bars) {
            if (b.symbol == e.symbol && b.date < e.date) {
                b.open *= e.factor;
                b.high *= e.factor;
                b.low *= e.factor;
                b.close *= e.factor;
            }
        }
    }
    return bars;
}

std::vector<PeriodBar> aggregate_period(std::vector<DailyBar> bars, Calendar c) {
    std::stable_sort(bars.begin(), bars.end(), [](const DailyBar& a, const DailyBar& b) {
        if (a.symbol != b.symbol) return a.symbol < b.symbol;
        return a.date < b.date;
    });

    std::vector<PeriodBar> out;
    PeriodBar cur;
    int days_in_period = 0;

    auto flush = [&]() {
        if (days_in_period >= 2) out.push_back(cur);
        days_in_period = 0;
    };

    for (const auto& b : bars) {
        PeriodId pid = period_of(b.date, c);
        if (days_in_period == 0 || b.symbol != cur.symbol || !(pid == cur.period)) {
            flush();
            cur.symbol = b.symbol;
            cur.period = pid;
            cur.anchor_close = b.close;
            cur.high_close = b.close;
            cur.low_close = b.close;
            cur.first_date = b.date;
        }
        cur.high_close = std::max(cur.high_close, b.close);
        cur.low_close = std::min(cur.low_close, b.close);
        cur.last_close = b.close;
        cur.last_date = b.date;
        ++days_in_period;
    }
    flush();
    return out;
}

double period_rate(const std::vector<RatePoint>& rates, const PeriodBar& period) {
    const RatePoint* best = nullptr;
    for (const auto& p : rates) {
        if (p.date <= period.first_date && (!best || best->date <= p.date))
            best = &p;
    }
    if (!best) {
        throw MissingDataError("no rate point on or before " + to_string(period.first_date));
    }
    double denom = period.period.calendar == Calendar::Weekly ? 52.0 : 12.0;
    return best->annual_yield / denom;
}

}  // namespace pfrontier
