#ifndef PFRONTIER_BACKTEST_HPP
#define PFRONTIER_BACKTEST_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfrontier/market_data.hpp"
#include "pfrontier/pindex.hpp"
#include "pfrontier/types.hpp"

namespace pfrontier {

// ---------------------------------------------------------------------------
// Panel: period bars keyed by (symbol, period), with the market index series
// and per-period rates. Formation at period t uses t (and t-1 for the
// fallback); the holding leg is t+1.
// ---------------------------------------------------------------------------

struct MarketPanel {
    Calendar calendar = Calendar::Weekly;
    std::vector<int> period_indexes;  // sorted, one per index-bar period
    std::map<std::string, std::map<int, PeriodBar>> stock_bars;
    std::map<int, PeriodBar> index_bars;
    std::map<int, double> rates;  // simple rate per period
};

/// Organizes aggregated bars into a panel. Periods lacking an index bar are
/// excluded. Throws MissingDataError when a period has no applicable rate.
MarketPanel build_panel(const std::vector<PeriodBar>& bars,
                        const std::string& index_symbol,
                        const std::vector<RatePoint>& rates);

// ---------------------------------------------------------------------------
// Strategies.
// ---------------------------------------------------------------------------

enum class StrategyKind { HPRatio, EEFStocks, HPRatioPlusRiskFree, LeftFrontier, RightFrontier };
enum class Accounting { Reinvest, NonReinvest };

std::string to_string(StrategyKind k);
std::string to_string(Accounting a);
StrategyKind parse_strategy_kind(const std::string& s);

/// SSE-style order execution limits. threshold_share generalizes the 10.80
/// threshold of the 10% worked example (0.8 * limit above previous close).
struct PriceLimit {
    double default_limit = 0.10;
    std::map<std::string, double> per_symbol;
    double threshold_share = 0.8;
    int defer_cap = 5;

    double limit_for(const std::string& symbol) const {
        auto it = per_symbol.find(symbol);
        return it == per_symbol.end() ? default_limit : it->second;
    }
};

struct StrategySpec {
    StrategyKind kind = StrategyKind::HPRatio;
    Calendar calendar = Calendar::Weekly;
    Accounting accounting = Accounting::Reinvest;
    std::optional<PriceLimit> price_limit;  // nullopt: limits off
};

struct PeriodOutcome {
    int period_index = 0;  // holding period
    double ret = 0.0;
    std::vector<std::string> selection;  // symbols actually held
};

struct SkipEvent {
    int period_index = 0;
    std::string reason;
};

struct StrategyResult {
    std::vector<PeriodOutcome> per_period;
    double cumulative = 0.0;
    double annualized = 0.0;
    double years = 0.0;
    std::vector<SkipEvent> skipped_periods;
};

/// Reinvest: prod(1+r) - 1, flooring at total ruin (-1). Non-reinvest: sum.
double accumulate(std::span<const double> returns, Accounting accounting);

/// Geometric (1+cum)^(1/years) - 1 when 1+cum > 0, else the arithmetic
/// fallback cum / years.
double annualize(double cumulative, double years);

struct Execution {
    double price = 0.0;
    Date date;
};

/// Applies the limit-up order rules starting at bars[order_idx]:
/// (a) lowest price at the limit-up price -> defer to the next trading day;
/// (b) lowest price at or below the threshold -> execute at the low;
/// (c) otherwise execute at the close. Returns nullopt when the order is
/// cancelled (defer cap exhausted or the series ends).
std::optional<Execution> simulate_limit_buy(std::span<const DailyBar> bars,
                                            size_t order_idx, double limit,
                                            double threshold_share = 0.8,
                                            int defer_cap = 5);

/// Formation on period t, holding over t+1 at period closes.
StrategyResult run_strategy(const StrategySpec& spec, const MarketPanel& panel,
                            const DeltaPolicy& delta_policy, size_t grid_size = 64);

/// As run_strategy, but entries route through simulate_limit_buy against the
/// daily bars; with spec.price_limit unset the results are identical.
StrategyResult run_adjusted_strategy(const StrategySpec& spec, const MarketPanel& panel,
                                     const std::vector<DailyBar>& daily_bars,
                                     const DeltaPolicy& delta_policy,
                                     size_t grid_size = 64);

}  // namespace pfrontier

#endif
