#include "pfrontier/backtest.hpp"

#include <algorithm>
#include <cmath>

#include "pfrontier/frontier.hpp"

namespace pfrontier {

MarketPanel build_panel(const std::vector<PeriodBar>& bars,
                        const std::string& index_symbol,
                        const std::vector<RatePoint>& rates) {
    MarketPanel panel;
    bool saw_any = false;
    for (const auto& b : bars) {
        if (!saw_any) {
            panel.calendar = b.period.calendar;
            saw_any = true;
        }
        if (b.symbol == index_symbol) {
            panel.index_bars[b.period.index] = b;
        } else {
            panel.stock_bars[b.symbol][b.period.index] = b;
        }
    }
    for (const auto& [idx, bar] : panel.index_bars) {
        panel.period_indexes.push_back(idx);
        panel.rates[idx] = period_rate(rates, bar);
    }
    return panel;
}

std::string to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::HPRatio: return "hpratio";
        case StrategyKind::EEFStocks: return "eef";
        case StrategyKind::HPRatioPlusRiskFree: return "hpratio_rf";
        case StrategyKind::LeftFrontier: return "left";
        case StrategyKind::RightFrontier: return "right";
    }
    return "unknown";
}

std::string to_string(Accounting a) {
    return a == Accounting::Reinvest ? "reinvest" : "non_reinvest";
}

StrategyKind parse_strategy_kind(const std::string& s) {
    if (s == "hpratio") return StrategyKind::HPRatio;
    if (s == "eef") return StrategyKind::EEFStocks;
    if (s == "hpratio_rf") return StrategyKind::HPRatioPlusRiskFree;
    if (s == "left") return StrategyKind::LeftFrontier;
    if (s == "right") return StrategyKind::RightFrontier;
    throw ParseError("unknown strategy kind: '" + s + "'");
}

double accumulate(std::span<const double> returns, Accounting accounting) {
    if (accounting == Accounting::NonReinvest) {
        double sum = 0.0;
        for (double r : returns) sum += r;
        return sum;
    }
    double wealth = 1.0;
    for (double r : returns) {
        wealth *= 1.0 + r;
        if (wealth <= 0.0) return -1.0;  // ruin is absorbing
    }
    return wealth - 1.0;
}

double annualize(double cumulative, double years) {
    if (years <= 0.0) throw DomainError("annualize requires years > 0");
    if (1.0 + cumulative > 0.0) return std::pow(1.0 + cumulative, 1.0 / years) - 1.0;
    return cumulative / years;
}

std::optional<Execution> simulate_limit_buy(std::span<const DailyBar> bars,
                                            size_t order_idx, double limit,
                                            double threshold_share, int defer_cap) {
    if (order_idx == 0 || order_idx >= bars.size())
        throw DomainError("simulate_limit_buy: no previous close for the limit reference");
    for (int attempt = 0; attempt <= defer_cap; ++attempt) {
        size_t i = order_idx + static_cast<size_t>(attempt);
        if (i >= bars.size()) return std::nullopt;  // series ended while deferred
        const DailyBar& day = bars[i];
        double prev_close = bars[i - 1].close;
        double limit_up = prev_close * (1.0 + limit);
        if (day.low >= limit_up * (1.0 - 1e-12)) continue;  // rule a: locked limit-up
        double threshold = prev_close * (1.0 + threshold_share * limit);
        if (day.low <= threshold * (1.0 + 1e-12)) return Execution{day.low, day.date};  // rule b
        return Execution{day.close, day.date};  // rule c
    }
    return std::nullopt;  // defer cap exhausted
}

namespace {

struct HoldingLeg {
    double ret = 0.0;
    bool ok = false;
    std::string skip_reason;
};

// Entry price for one selected symbol over the holding period bar. Without
// limits the entry is the period's anchor close.
HoldingLeg holding_return(const PeriodBar& hold_bar, const PriceLimit* limits,
                          const std::map<std::string, std::vector<DailyBar>>* daily,
                          const std::string& symbol) {
    HoldingLeg leg;
    if (!limits) {
        leg.ret = hold_bar.period_return();
        leg.ok = true;
        return leg;
    }
    auto it = daily->find(symbol);
    if (it == daily->end()) {
        leg.skip_reason = "no daily bars for " + symbol;
        return leg;
    }
    const auto& series = it->second;
    size_t order_idx = series.size();
    for (size_t i = 0; i < series.size(); ++i) {
        if (series[i].date == hold_bar.first_date) {
            order_idx = i;
            break;
        }
    }
    if (order_idx == series.size()) {
        leg.skip_reason = "no entry day for " + symbol;
        return leg;
    }
    if (order_idx == 0) {
        // No limit reference exists; the rules cannot bind, buy at the close.
        leg.ret = hold_bar.period_return();
        leg.ok = true;
        return leg;
    }
    auto exec = simulate_limit_buy(series, order_idx, limits->limit_for(symbol),
                                   limits->threshold_share, limits->defer_cap);
    if (!exec || hold_bar.last_date < exec->date) {
        leg.skip_reason = "order cancelled for " + symbol;
        return leg;
    }
    leg.ret = hold_bar.last_close / exec->price - 1.0;
    leg.ok = true;
    return leg;
}

StrategyResult run_engine(const StrategySpec& spec, const MarketPanel& panel,
                          const std::map<std::string, std::vector<DailyBar>>* daily,
                          const DeltaPolicy& delta_policy, size_t grid_size) {
    const auto& periods = panel.period_indexes;
    if (periods.size() < 2)
        throw DomainError("run_strategy: panel spans fewer than 2 periods");

    const PriceLimit* limits = spec.price_limit ? &*spec.price_limit : nullptr;
    StrategyResult result;

    for (size_t ti = 0; ti + 1 < periods.size(); ++ti) {
        int formation = periods[ti];
        int holding = periods[ti + 1];
        const int* prev = ti > 0 ? &periods[ti - 1] : nullptr;

        const PeriodBar& index_bar = panel.index_bars.at(formation);
        const PeriodBar* prev_index = nullptr;
        double r_prev = 0.0;
        if (prev) {
            prev_index = &panel.index_bars.at(*prev);
            r_prev = panel.rates.at(*prev);
        }
        double r_formation = panel.rates.at(formation);
        double r_holding = panel.rates.at(holding);

        // Formation-period cross-section.
        std::vector<AssetPoint> assets;
        for (const auto& [symbol, by_period] : panel.stock_bars) {
            auto bar_it = by_period.find(formation);
            if (bar_it == by_period.end()) continue;
            const PeriodBar* prev_bar = nullptr;
            if (prev) {
                auto pit = by_period.find(*prev);
                if (pit != by_period.end()) prev_bar = &pit->second;
            }
            RecordOutcome out = compute_record(bar_it->second, prev_bar, index_bar,
                                               prev_index, r_formation, r_prev,
                                               delta_policy);
            if (out.record) {
                assets.push_back({symbol, out.record->p_index, out.record->realized_return});
            }
        }

        // Selection.
        std::vector<std::string> selection;
        if (!assets.empty()) {
            switch (spec.kind) {
                case StrategyKind::HPRatio:
                case StrategyKind::HPRatioPlusRiskFree:
                    selection.push_back(tangent_stock(assets, r_formation));
                    break;
                case StrategyKind::EEFStocks:
                case StrategyKind::LeftFrontier: {
                    FrontierCurve curve = build_eef(assets, grid_size);
                    selection = eef_stock_members(curve, FrontierSide::Left);
                    break;
                }
                case StrategyKind::RightFrontier: {
                    FrontierCurve curve = build_eef(assets, grid_size);
                    selection = eef_stock_members(curve, FrontierSide::Right);
                    break;
                }
            }
        }

        // Holding leg over t+1.
        std::vector<std::string> held;
        double sum = 0.0;
        for (const auto& symbol : selection) {
            auto sit = panel.stock_bars.find(symbol);
            if (sit == panel.stock_bars.end()) continue;
            auto bit = sit->second.find(holding);
            if (bit == sit->second.end()) continue;
            HoldingLeg leg = holding_return(bit->second, limits, daily, symbol);
            if (!leg.ok) continue;
            held.push_back(symbol);
            sum += leg.ret;
        }

        PeriodOutcome outcome;
        outcome.period_index = holding;
        if (held.empty()) {
            // Cash is parked under reinvest; no fresh dollar is staked
            // under non-reinvest.
            outcome.ret = spec.accounting == Accounting::Reinvest ? r_holding : 0.0;
            result.skipped_periods.push_back(
                {holding, assets.empty() ? "empty cross-section" : "empty selection"});
        } else {
            double stock_ret = sum / static_cast<double>(held.size());
            outcome.ret = spec.kind == StrategyKind::HPRatioPlusRiskFree
                              ? 0.5 * stock_ret + 0.5 * r_holding
                              : stock_ret;
            outcome.selection = std::move(held);
        }
        result.per_period.push_back(std::move(outcome));
    }

    std::vector<double> rets;
    rets.reserve(result.per_period.size());
    for (const auto& p : result.per_period) rets.push_back(p.ret);
    result.cumulative = accumulate(rets, spec.accounting);

    const PeriodBar& first_hold = panel.index_bars.at(periods[1]);
    const PeriodBar& last_hold = panel.index_bars.at(periods.back());
    result.years = static_cast<double>(to_days(last_hold.last_date) -
                                       to_days(first_hold.first_date)) /
                   365.25;
    if (result.years <= 0.0) result.years = 1.0 / (panel.calendar == Calendar::Weekly ? 52.0 : 12.0);
    result.annualized = annualize(result.cumulative, result.years);
    return result;
}

}  // namespace

StrategyResult run_strategy(const StrategySpec& spec, const MarketPanel& panel,
                            const DeltaPolicy& delta_policy, size_t grid_size) {
    StrategySpec plain = spec;
    plain.price_limit.reset();
    return run_engine(plain, panel, nullptr, delta_policy, grid_size);
}

StrategyResult run_adjusted_strategy(const StrategySpec& spec, const MarketPanel& panel,
                                     const std::vector<DailyBar>& daily_bars,
                                     const DeltaPolicy& delta_policy, size_t grid_size) {
    if (!spec.price_limit) return run_strategy(spec, panel, delta_policy, grid_size);
    std::map<std::string, std::vector<DailyBar>> daily;
    for (const auto& b : daily_bars) daily[b.symbol].push_back(b);
    for (auto& [sym, series] : daily) {
        std::stable_sort(series.begin(), series.end(),
                         [](const DailyBar& a, const DailyBar& b) { return a.date < b.date; });
    }
    return run_engine(spec, panel, &daily, delta_policy, grid_size);
}

}  // namespace pfrontier
