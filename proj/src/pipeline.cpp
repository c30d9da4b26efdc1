#include "pfrontier/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "pfrontier/backtest.hpp"
#include "pfrontier/factor_lab.hpp"
#include "pfrontier/frontier.hpp"
#include "pfrontier/market_data.hpp"
#include "pfrontier/pindex.hpp"
#include "pfrontier/synth.hpp"
#include "pfrontier/types.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace pfrontier {

namespace {

// ---------------------------------------------------------------------------
// Logging, controlled by PFRONTIER_LOG (quiet | info | debug).
// ---------------------------------------------------------------------------

int log_level() {
    static int level = [] {
        const char* env = std::getenv("PFRONTIER_LOG");
        if (!env) return 1;
        std::string v(env);
        if (v == "quiet") return 0;
        if (v == "debug") return 2;
        return 1;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[pfrontier] " << msg << "\n";
}

void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[pfrontier:debug] " << msg << "\n";
}

// ---------------------------------------------------------------------------
// Formatting.
// ---------------------------------------------------------------------------

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

std::string fmt_exact(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string month_string(int month_id) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", month_id / 100, month_id % 100);
    return buf;
}

std::ofstream open_output(const fs::path& path, std::uint64_t hash) {
    std::ofstream out(path);
    if (!out) throw MissingDataError("cannot write output file: " + path.string());
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    out << "# config=" << hex << " version=" << kVersion << "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Config plumbing.
// ---------------------------------------------------------------------------

std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct Resolved {
    fs::path out_dir;
    std::string bars_path, rates_path, factors_path, adjustments_path;
    Calendar calendar = Calendar::Weekly;
    DeltaPolicy delta;
    std::string index_symbol;
    size_t grid_size = 64;
    std::uint64_t hash = 0;
};

Resolved resolve(const RunConfig& config) {
    Resolved r;
    r.out_dir = config.get("out", "out");
    r.bars_path = config.get("bars", (r.out_dir / "bars.csv").string());
    r.rates_path = config.get("rates", (r.out_dir / "rates.csv").string());
    r.factors_path = config.get("factors", (r.out_dir / "factors.csv").string());
    r.adjustments_path = config.get("adjustments", "");
    r.calendar = parse_calendar(config.get("calendar", "weekly"));
    std::string delta = config.get("delta", "r");
    if (delta != "r") {
        r.delta.fixed_delta = std::stod(delta);
        if (*r.delta.fixed_delta <= -1.0)
            throw ValidationError("fixed delta must exceed -1");
    }
    r.index_symbol = config.get("index_symbol", "INDEX");
    r.grid_size = static_cast<size_t>(std::stoul(config.get("grid_size", "64")));
    r.hash = config_hash(config);
    return r;
}

struct Inputs {
    std::vector<DailyBar> bars;  // forward-adjusted
    std::vector<RatePoint> rates;
};

Inputs load_inputs(const Resolved& r) {
    Inputs in;
    in.bars = load_daily_bars(r.bars_path);
    if (!r.adjustments_path.empty()) {
        std::vector<std::string> warnings;
        in.bars = forward_adjust(std::move(in.bars), load_adjustments(r.adjustments_path),
                                 &warnings);
        for (const auto& w : warnings) log_info(w);
    }
    in.rates = load_rates(r.rates_path);
    return in;
}

// Records for one formation period across the stock cross-section, in
// symbol order. Exclusions are reported through `excluded` when non-null.
std::vector<PIndexRecord> period_records(
    const MarketPanel& panel, size_t ti, const DeltaPolicy& delta,
    std::vector<std::pair<std::string, SkipReason>>* excluded = nullptr) {
    const auto& periods = panel.period_indexes;
    int formation = periods[ti];
    const PeriodBar& index_bar = panel.index_bars.at(formation);
    const PeriodBar* prev_index = nullptr;
    double r_prev = 0.0;
    if (ti > 0) {
        prev_index = &panel.index_bars.at(periods[ti - 1]);
        r_prev = panel.rates.at(periods[ti - 1]);
    }
    double r = panel.rates.at(formation);

    std::vector<PIndexRecord> records;
    for (const auto& [symbol, by_period] : panel.stock_bars) {
        auto bit = by_period.find(formation);
        if (bit == by_period.end()) continue;
        const PeriodBar* prev_bar = nullptr;
        if (ti > 0) {
            auto pit = by_period.find(periods[ti - 1]);
            if (pit != by_period.end()) prev_bar = &pit->second;
        }
        RecordOutcome out =
            compute_record(bit->second, prev_bar, index_bar, prev_index, r, r_prev, delta);
        if (out.record) {
            records.push_back(*out.record);
        } else if (excluded) {
            excluded->push_back({symbol, out.skip});
        }
    }
    return records;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

int cmd_synth(const RunConfig& config, const Resolved& r) {
    std::uint64_t seed = std::stoull(config.get("seed", "42"));
    size_t n_stocks = std::stoul(config.get("stocks", "20"));
    size_t n_periods = std::stoul(config.get("periods", "60"));

    std::map<std::string, std::string> regime_kv;
    for (const auto& [k, v] : config.values) {
        if (k.rfind("regime.", 0) == 0) regime_kv[k.substr(7)] = v;
    }
    if (!regime_kv.count("calendar")) regime_kv["calendar"] = to_string(r.calendar);
    SynthRegime regime = parse_regime(regime_kv);

    SyntheticPanel panel = generate_synthetic_panel(seed, n_stocks, n_periods, regime);
    fs::create_directories(r.out_dir);

    {
        auto out = open_output(r.out_dir / "bars.csv", r.hash);
        out << "symbol,date,open,high,low,close\n";
        for (const auto& b : panel.bars) {
            out << b.symbol << ',' << to_string(b.date) << ',' << fmt_exact(b.open) << ','
                << fmt_exact(b.high) << ',' << fmt_exact(b.low) << ',' << fmt_exact(b.close)
                << '\n';
        }
    }
    {
        auto out = open_output(r.out_dir / "rates.csv", r.hash);
        out << "date,annual_yield\n";
        for (const auto& p : panel.rates)
            out << to_string(p.date) << ',' << fmt_exact(p.annual_yield) << '\n';
    }
    {
        auto out = open_output(r.out_dir / "factors.csv", r.hash);
        out << "month,mkt_rf,smb,hml,rmw,cma,rf\n";
        for (const auto& f : panel.factors) {
            out << month_string(f.month_id) << ',' << fmt_exact(f.mkt_rf) << ','
                << fmt_exact(f.smb) << ',' << fmt_exact(f.hml) << ',' << fmt_exact(f.rmw)
                << ',' << fmt_exact(f.cma) << ',' << fmt_exact(f.rf) << '\n';
        }
    }
    {
        json truth;
        truth["lambda_mkt"] = panel.truth.lambda_mkt;
        truth["annual_rate"] = panel.truth.annual_rate;
        truth["stock_drift"] = panel.truth.stock_drift;
        truth["seed"] = seed;
        std::ofstream out(r.out_dir / "truth.json");
        out << truth.dump(2) << '\n';
    }
    log_info("synth: wrote " + std::to_string(panel.bars.size()) + " bars to " +
             r.out_dir.string());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// pindex
// ---------------------------------------------------------------------------

int cmd_pindex(const RunConfig& config, const Resolved& r) {
    Inputs in = load_inputs(r);
    MarketPanel panel = build_panel(aggregate_period(in.bars, r.calendar),
                                    config.get("index_symbol", "INDEX"), in.rates);
    fs::create_directories(r.out_dir);

    auto out = open_output(r.out_dir / "pindex.csv", r.hash);
    out << "symbol,period,delta,strike,put,p_index,return,p_ratio,window\n";
    auto excl = open_output(r.out_dir / "pindex_exclusions.csv", r.hash);
    excl << "symbol,period,reason\n";

    size_t n_records = 0, n_excluded = 0;
    for (size_t ti = 0; ti < panel.period_indexes.size(); ++ti) {
        std::vector<std::pair<std::string, SkipReason>> excluded;
        for (const auto& rec : period_records(panel, ti, r.delta, &excluded)) {
            out << rec.symbol << ',' << rec.period.index << ',' << fmt(rec.delta) << ','
                << fmt(rec.strike) << ',' << fmt(rec.put_price) << ',' << fmt(rec.p_index)
                << ',' << fmt(rec.realized_return) << ',' << fmt(rec.p_ratio) << ','
                << rec.window_periods << '\n';
            ++n_records;
        }
        for (const auto& [symbol, reason] : excluded) {
            excl << symbol << ',' << panel.period_indexes[ti] << ',' << to_string(reason)
                 << '\n';
            ++n_excluded;
        }
    }
    log_info("pindex: " + std::to_string(n_records) + " records, " +
             std::to_string(n_excluded) + " exclusions");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// frontier
// ---------------------------------------------------------------------------

int cmd_frontier(const RunConfig& config, const Resolved& r) {
    std::string period_str = config.get("period");
    if (period_str.empty())
        throw ParseError("frontier requires a period (--period or config key 'period')");
    int period = std::stoi(period_str);

    Inputs in = load_inputs(r);
    MarketPanel panel = build_panel(aggregate_period(in.bars, r.calendar),
                                    config.get("index_symbol", "INDEX"), in.rates);
    auto it = std::find(panel.period_indexes.begin(), panel.period_indexes.end(), period);
    if (it == panel.period_indexes.end())
        throw DomainError("period " + period_str + " not present in the panel");
    size_t ti = static_cast<size_t>(it - panel.period_indexes.begin());

    std::vector<PIndexRecord> records = period_records(panel, ti, r.delta);
    if (records.empty())
        throw DomainError("empty cross-section for period " + period_str);

    std::vector<AssetPoint> assets;
    for (const auto& rec : records)
        assets.push_back({rec.symbol, rec.p_index, rec.realized_return});

    FrontierCurve curve = build_eef(assets, r.grid_size);
    std::string tangent = tangent_stock(assets, panel.rates.at(period));

    fs::create_directories(r.out_dir);
    auto out = open_output(r.out_dir / ("frontier_" + period_str + ".csv"), r.hash);
    out << "# tangent=" << tangent << "\n";
    out << "v,R,side,weights_json\n";
    auto emit = [&](const CurveVertex& vx, const char* side) {
        json weights = json::object();
        for (size_t i = 0; i < vx.weights.size(); ++i) {
            if (vx.weights[i] > 1e-9) weights[curve.symbols[i]] = vx.weights[i];
        }
        out << fmt(vx.v) << ',' << fmt(vx.R) << ',' << side << ",\""
            << [&] {
                   std::string s = weights.dump();
                   std::string escaped;
                   for (char c : s) {
                       if (c == '"') escaped += "\"\"";
                       else escaped += c;
                   }
                   return escaped;
               }()
            << "\"\n";
    };
    for (const auto& vx : curve.left) emit(vx, "left");
    for (const auto& vx : curve.right) emit(vx, "right");
    log_info("frontier: period " + period_str + ", " + std::to_string(curve.left.size()) +
             " left vertices, " + std::to_string(curve.right.size()) +
             " right vertices, tangent " + tangent);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// backtest
// ---------------------------------------------------------------------------

int cmd_backtest(const RunConfig& config, const Resolved& r) {
    Inputs in = load_inputs(r);
    MarketPanel panel = build_panel(aggregate_period(in.bars, r.calendar),
                                    config.get("index_symbol", "INDEX"), in.rates);

    std::vector<StrategyKind> kinds;
    {
        std::stringstream ss(config.get("strategies", "hpratio,eef,hpratio_rf,left,right"));
        std::string tok;
        while (std::getline(ss, tok, ',')) kinds.push_back(parse_strategy_kind(strip(tok)));
    }
    std::vector<Accounting> accountings;
    {
        std::string a = config.get("accounting", "both");
        if (a == "both" || a == "reinvest") accountings.push_back(Accounting::Reinvest);
        if (a == "both" || a == "non-reinvest" || a == "non_reinvest")
            accountings.push_back(Accounting::NonReinvest);
        if (accountings.empty()) throw ParseError("unknown accounting: '" + a + "'");
    }
    std::optional<PriceLimit> limits;
    {
        std::string pl = config.get("price_limit", "off");
        if (pl != "off") {
            PriceLimit p;
            p.default_limit = std::stod(pl);
            p.threshold_share = std::stod(config.get("threshold_share", "0.8"));
            p.defer_cap = std::stoi(config.get("defer_cap", "5"));
            limits = p;
        }
    }

    fs::create_directories(r.out_dir);
    auto rows = open_output(r.out_dir / "backtest_periods.csv", r.hash);
    rows << "period,strategy,selection,return,cumulative\n";
    json summary;
    summary["version"] = kVersion;
    summary["calendar"] = to_string(r.calendar);
    summary["results"] = json::array();

    for (StrategyKind kind : kinds) {
        for (Accounting acc : accountings) {
            StrategySpec spec{kind, r.calendar, acc, limits};
            StrategyResult result = limits
                                        ? run_adjusted_strategy(spec, panel, in.bars,
                                                                r.delta, r.grid_size)
                                        : run_strategy(spec, panel, r.delta, r.grid_size);
            std::string label = to_string(kind) + "/" + to_string(acc);
            std::vector<double> rets;
            for (const auto& p : result.per_period) {
                rets.push_back(p.ret);
                std::string sel;
                for (const auto& s : p.selection) {
                    if (!sel.empty()) sel += ';';
                    sel += s;
                }
                rows << p.period_index << ',' << label << ',' << sel << ',' << fmt(p.ret)
                     << ',' << fmt(accumulate(rets, acc)) << '\n';
            }
            json entry;
            entry["strategy"] = to_string(kind);
            entry["calendar"] = to_string(r.calendar);
            entry["accounting"] = to_string(acc);
            entry["cumulative"] = result.cumulative;
            entry["annualized"] = result.annualized;
            entry["years"] = result.years;
            entry["periods"] = result.per_period.size();
            entry["skipped"] = result.skipped_periods.size();
            summary["results"].push_back(entry);
        }
    }
    {
        char hex[24];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(r.hash));
        summary["config"] = hex;
        std::ofstream out(r.out_dir / "backtest_summary.json");
        out << summary.dump(2) << '\n';
    }
    log_info("backtest: " + std::to_string(summary["results"].size()) + " strategy runs");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// factor
// ---------------------------------------------------------------------------

int cmd_factor(const RunConfig& config, const Resolved& r) {
    Inputs in = load_inputs(r);
    // The factor analysis is monthly regardless of the backtest calendar.
    MarketPanel panel = build_panel(aggregate_period(in.bars, Calendar::Monthly),
                                    config.get("index_symbol", "INDEX"), in.rates);
    std::vector<FactorObservation> factor_rows = load_factors(r.factors_path);
    std::map<int, FactorObservation> factors;
    for (const auto& f : factor_rows) factors[f.month_id] = f;

    bool pratio_mode = config.get("mode", "pindex") == "pratio";

    // Per-stock monthly p-index and realized return.
    std::map<std::string, std::map<int, double>> v_panel, ret_panel;
    for (size_t ti = 0; ti < panel.period_indexes.size(); ++ti) {
        for (const auto& rec : period_records(panel, ti, r.delta)) {
            v_panel[rec.symbol][rec.period.index] = rec.p_index;
            ret_panel[rec.symbol][rec.period.index] = rec.realized_return;
        }
    }

    // Characteristic: the p-index itself, or the cross-sectionally
    // min-max-normalized modified p-ratio.
    std::map<std::string, std::map<int, double>> c_panel;
    if (!pratio_mode) {
        c_panel = v_panel;
    } else {
        for (int month : panel.period_indexes) {
            std::vector<std::string> syms;
            std::vector<double> rs, vs;
            for (const auto& [symbol, by_month] : v_panel) {
                auto vit = by_month.find(month);
                auto rit = ret_panel[symbol].find(month);
                if (vit == by_month.end() || rit == ret_panel[symbol].end()) continue;
                syms.push_back(symbol);
                vs.push_back(vit->second);
                rs.push_back(rit->second);
            }
            if (syms.size() < 2) continue;
            try {
                std::vector<double> ratios = modified_p_ratio(rs, vs);
                for (size_t i = 0; i < syms.size(); ++i) c_panel[syms[i]][month] = ratios[i];
            } catch (const DomainError&) {
                log_info("factor: degenerate cross-section in " + month_string(month) +
                         ", p-ratio characteristic skipped");
            }
        }
    }

    const auto& months = panel.period_indexes;
    if (months.size() < 2) throw DomainError("factor analysis needs at least 2 months");

    // Decile formation at t-1, portfolio returns at t.
    std::vector<FmMonth> fm_months;
    std::vector<std::vector<double>> decile_series(10);
    std::vector<int> decile_months;
    for (size_t ti = 1; ti < months.size(); ++ti) {
        int month = months[ti], prev = months[ti - 1];
        std::vector<std::pair<std::string, double>> cross_section;
        std::map<std::string, double> next_returns;
        for (const auto& [symbol, by_month] : c_panel) {
            auto cit = by_month.find(prev);
            if (cit == by_month.end()) continue;
            auto rit = ret_panel[symbol].find(month);
            if (rit == ret_panel[symbol].end()) continue;
            cross_section.push_back({symbol, cit->second});
            next_returns[symbol] = rit->second;
        }
        if (cross_section.size() < 10)
            throw DomainError("insufficient cross-section in month " + month_string(month) +
                              ": " + std::to_string(cross_section.size()) + " stocks");
        auto assignments = form_deciles(cross_section, month);
        auto rets = decile_returns(assignments, next_returns);
        bool complete = std::all_of(rets.begin(), rets.end(),
                                    [](const auto& x) { return x.has_value(); });
        if (!complete) continue;

        FmMonth fm;
        fm.month_id = month;
        for (const auto& a : assignments) {
            fm.returns.push_back(*rets[static_cast<size_t>(a.portfolio_id - 1)]);
            fm.v_mean.push_back(a.formation_v_mean);
            fm.v2_mean.push_back(a.formation_v2_mean);
        }
        fm_months.push_back(std::move(fm));
        for (int p = 0; p < 10; ++p)
            decile_series[static_cast<size_t>(p)].push_back(*rets[static_cast<size_t>(p)]);
        decile_months.push_back(month);
    }

    fs::create_directories(r.out_dir);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    // Two-parameter cross-sectional regression.
    {
        auto out = open_output(r.out_dir / "factor_two_param.csv", r.hash);
        out << "coef,avg,pvalue,tstat\n";
        std::vector<std::string> warnings;
        RegressionEstimate est = fama_macbeth_two_param(fm_months, 4, &warnings);
        for (const auto& w : warnings) log_info("factor: " + w);
        for (size_t i = 0; i < est.names.size(); ++i) {
            out << est.names[i] << ',' << fmt(est.coefficients[i]) << ','
                << fmt(est.pvalues[i]) << ',' << fmt(est.tstats[i]) << '\n';
        }
    }

    // Decile performance table.
    {
        auto out = open_output(r.out_dir / "factor_deciles.csv", r.hash);
        out << "portfolio,ann_return,ann_vol,t_return,alpha,t_alpha\n";
        for (int p = 0; p < 10; ++p) {
            const auto& series = decile_series[static_cast<size_t>(p)];
            double ann_return = nan, ann_vol = nan, t_return = nan;
            double alpha = nan, t_alpha = nan;
            if (!series.empty()) {
                double wealth = 1.0, mean = 0.0;
                for (double x : series) {
                    wealth *= 1.0 + x;
                    mean += x;
                }
                mean /= static_cast<double>(series.size());
                if (wealth > 0.0)
                    ann_return =
                        std::pow(wealth, 12.0 / static_cast<double>(series.size())) - 1.0;
                if (series.size() > 1) {
                    double ss = 0.0;
                    for (double x : series) ss += (x - mean) * (x - mean);
                    ann_vol = std::sqrt(ss / static_cast<double>(series.size() - 1)) *
                              std::sqrt(12.0);
                }
                if (series.size() > 5) t_return = newey_west_tstat(series, 4).tstat;

                std::vector<double> excess;
                std::vector<FactorObservation> fobs;
                for (size_t k = 0; k < series.size(); ++k) {
                    auto fit = factors.find(decile_months[k]);
                    if (fit == factors.end()) continue;
                    excess.push_back(series[k] - fit->second.rf);
                    fobs.push_back(fit->second);
                }
                if (excess.size() >= 7) {
                    RegressionEstimate est = ff5_alpha(excess, fobs, 4);
                    alpha = est.coefficients[0];
                    t_alpha = est.tstats[0];
                }
            }
            std::string label = p == 0 ? "L" : (p == 9 ? "H" : std::to_string(p + 1));
            out << label << ',' << fmt(ann_return) << ',' << fmt(ann_vol) << ','
                << fmt(t_return) << ',' << fmt(alpha) << ',' << fmt(t_alpha) << '\n';
        }
    }

    // Monthly spread series.
    {
        auto out = open_output(r.out_dir / "factor_spreads.csv", r.hash);
        out << "month,h_minus_l,l_minus_h\n";
        std::vector<double> hl = spread_portfolio(decile_series[9], decile_series[0]);
        for (size_t k = 0; k < hl.size(); ++k) {
            out << month_string(decile_months[k]) << ',' << fmt(hl[k]) << ','
                << fmt(-hl[k]) << '\n';
        }
    }

    // Two-stage factor premium estimates.
    {
        StockMonthPanel smp;
        for (int m : months) {
            if (factors.count(m)) {
                smp.months.push_back(m);
                smp.factors[m] = factors.at(m);
            }
        }
        for (const auto& [symbol, by_month] : ret_panel) {
            for (const auto& [m, ret] : by_month) {
                auto fit = factors.find(m);
                if (fit == factors.end()) continue;
                smp.excess_returns[symbol][m] = ret - fit->second.rf;
            }
        }
        smp.characteristic = c_panel;

        const char* char_label = pratio_mode ? "p_ratio" : "p_index";
        auto write_lambdas = [&](const char* file, const TwoStageResult& res,
                                 bool with_char) {
            auto out = open_output(r.out_dir / file, r.hash);
            out << "factor,lambda_avg,tstat,pvalue\n";
            const auto& est = res.lambdas;
            for (size_t i = 0; i < est.names.size(); ++i) {
                std::string name =
                    with_char && i == 0 ? char_label : est.names[i];
                out << name << ',' << fmt(est.coefficients[i]) << ',' << fmt(est.tstats[i])
                    << ',' << fmt(est.pvalues[i]) << '\n';
            }
            for (const auto& w : res.warnings) log_debug(std::string(file) + ": " + w);
        };
        write_lambdas("factor_lambdas_six.csv", two_stage_six_factor(smp, true, 4), true);
        write_lambdas("factor_lambdas_five.csv", two_stage_six_factor(smp, false, 4), false);
    }

    log_info("factor: " + std::to_string(fm_months.size()) + " usable months (" +
             std::string(pratio_mode ? "p-ratio" : "p-index") + " mode)");
    return kExitOk;
}

}  // namespace

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingDataError("cannot open config file: " + path);
    RunConfig config;
    std::string line, section;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = strip(line);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[' && s.back() == ']') {
            section = strip(s.substr(1, s.size() - 2));
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected key = value");
        std::string key = strip(s.substr(0, eq));
        std::string value = strip(s.substr(eq + 1));
        size_t comment = value.find(" #");
        if (comment != std::string::npos && value.front() != '"')
            value = strip(value.substr(0, comment));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (key.empty()) throw ParseError(path + ":" + std::to_string(line_no) + ": empty key");
        config.set(section.empty() ? key : section + "." + key, value);
    }
    return config;
}

std::uint64_t config_hash(const RunConfig& config) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [k, v] : config.values) {
        mix(k);
        mix("=");
        mix(v);
        mix("\n");
    }
    return h;
}

int run_command(const RunConfig& config, const std::string& command,
                std::string* error_out) {
    auto fail = [&](int code, const std::string& msg) {
        if (error_out) *error_out = msg;
        log_info("error: " + msg);
        return code;
    };
    try {
        Resolved r = resolve(config);
        if (command == "synth") return cmd_synth(config, r);
        if (command == "pindex") return cmd_pindex(config, r);
        if (command == "frontier") return cmd_frontier(config, r);
        if (command == "backtest") return cmd_backtest(config, r);
        if (command == "factor") return cmd_factor(config, r);
        return fail(kExitInputError, "unknown command: '" + command + "'");
    } catch (const ParseError& e) {
        return fail(kExitInputError, e.what());
    } catch (const ValidationError& e) {
        return fail(kExitInputError, e.what());
    } catch (const MissingDataError& e) {
        return fail(kExitInputError, e.what());
    } catch (const DomainError& e) {
        return fail(kExitEmptyData, e.what());
    } catch (const InternalError& e) {
        return fail(kExitInternalError, e.what());
    } catch (const std::exception& e) {
        return fail(kExitInternalError, e.what());
    }
}

}  // namespace pfrontier
