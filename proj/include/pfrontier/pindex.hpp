#ifndef PFRONTIER_PINDEX_HPP
#define PFRONTIER_PINDEX_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfrontier/market_data.hpp"
#include "pfrontier/types.hpp"

namespace pfrontier {

// ---------------------------------------------------------------------------
// One-step binomial risk-neutral estimation and p-index arithmetic.
// ---------------------------------------------------------------------------

/// Risk-neutral up-probability and the gross simple rate over the window
/// it was estimated on (one period, or two under the fallback).
struct RiskNeutralWeight {
    double pi = 0.0;             // in (0,1)
    double one_plus_r_eff = 1.0; // gross simple rate over the window
    int window_periods = 1;     // 1 or 2
};

/// A stock-period's p-index accounting.
struct PIndexRecord {
    std::string symbol;
    PeriodId period;
    double delta = 0.0;          // target return, = r per period by default
    double strike = 0.0;         // S0 * (1 + delta)
    double put_price = 0.0;
    double p_index = 0.0;        // put / strike
    double realized_return = 0.0;
    double p_ratio = 0.0;        // (R - r) / p_index
    int window_periods = 1;
};

/// Merges a period with its predecessor: anchor from the previous period,
/// extremes over both, exit from the current one.
PeriodBar two_period_bar(const PeriodBar& prev, const PeriodBar& cur);

/// pi = ((1+r) - d) / (u - d) from the index bar. When pi falls outside
/// (0,1) the two-period window is tried (rate doubles). Returns nullopt when
/// pi is still invalid after the fallback (callers skip the period).
/// Throws EstimationError when u == d on the attempted window.
std::optional<RiskNeutralWeight> estimate_pi(const PeriodBar& index_bar, double r,
                                             const PeriodBar* prev_index_bar = nullptr,
                                             double prev_r = 0.0);

/// Discounted risk-neutral put payoff with strike S0*(1+delta).
double put_price(const PeriodBar& stock_bar, const RiskNeutralWeight& w, double delta);

/// Discounted risk-neutral call payoff; counterpart of put_price for parity.
double call_price(const PeriodBar& stock_bar, const RiskNeutralWeight& w, double delta);

/// v = put / strike, checked against the section-2 bounds
/// max(1/(1+r) - 1/(1+delta), 0) <= v < 1/(1+r). Violations indicate bad
/// inputs and raise InternalError.
double p_index(double put, double strike, const RiskNeutralWeight& w, double delta);

/// Closed form v = ((1+delta) - d)/(1+delta) * (1-pi)/(1+r), valid for
/// d < 1+delta < u.
double p_index_closed_form(double down_factor, double delta, const RiskNeutralWeight& w);

/// (R - r) / v; requires v > 0.
double p_ratio(double realized_return, double r, double v);

/// Min-max normalizes R and v over the cross-section, then divides:
/// normalized R / (normalized v + epsilon).
std::vector<double> modified_p_ratio(std::span<const double> returns,
                                     std::span<const double> v,
                                     double epsilon = 1e-4);

/// Sum of w_i * v_i over a fully invested nonnegative weight vector.
double portfolio_p_index(std::span<const double> weights, std::span<const double> v);

/// Value-weighted portfolio p-index: sum(p_i) / ((1+delta) * sum(S0_i)).
double value_weighted_p_index(std::span<const double> puts,
                              std::span<const double> anchors, double delta);

// ---------------------------------------------------------------------------
// Per-stock record assembly with the two-period fallback chain.
// ---------------------------------------------------------------------------

enum class SkipReason { None, DegenerateIndex, InvalidPi, NonPositivePut, DegenerateStock };

std::string to_string(SkipReason r);

struct RecordOutcome {
    std::optional<PIndexRecord> record;
    SkipReason skip = SkipReason::None;
};

/// delta policy: when `fixed_delta` is set, use it; otherwise delta = r.
struct DeltaPolicy {
    std::optional<double> fixed_delta;
    double resolve(double r) const { return fixed_delta ? *fixed_delta : r; }
};

/// Computes one stock-period record. The pi fallback and the put fallback
/// trigger independently; both use the two-period window with doubled rate
/// (r + prev_r). A missing previous bar disables the fallback.
RecordOutcome compute_record(const PeriodBar& stock_bar, const PeriodBar* prev_stock_bar,
                             const PeriodBar& index_bar, const PeriodBar* prev_index_bar,
                             double r, double prev_r, const DeltaPolicy& delta_policy);

}  // namespace pfrontier

#endif
