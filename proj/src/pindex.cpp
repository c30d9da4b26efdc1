#include "pfrontier/pindex.hpp"

#include <algorithm>
#include <cmath>

namespace pfrontier {

PeriodBar two_period_bar(const PeriodBar& prev, const PeriodBar& cur) {
    PeriodBar b;
    b.symbol = cur.symbol;
    b.period = cur.period;
    b.anchor_close = prev.anchor_close;
    b.high_close = std::max(prev.high_close, cur.high_close);
    b.low_close = std::min(prev.low_close, cur.low_close);
    b.last_close = cur.last_close;
    b.first_date = prev.first_date;
    b.last_date = cur.last_date;
    return b;
}

namespace {

std::optional<RiskNeutralWeight> pi_from_bar(const PeriodBar& bar, double r, int window) {
    double u = bar.up_factor();
    double d = bar.down_factor();
    if (u == d) {
        throw EstimationError("degenerate window for " + bar.symbol + " period " +
                              std::to_string(bar.period.index) + ": u == d");
    }
    double pi = ((1.0 + r) - d) / (u - d);
    if (!(pi > 0.0 && pi < 1.0)) return std::nullopt;
    return RiskNeutralWeight{pi, 1.0 + r, window};
}

}  // namespace

std::optional<RiskNeutralWeight> estimate_pi(const PeriodBar& index_bar, double r,
                                             const PeriodBar* prev_index_bar,
                                             double prev_r) {
    auto w = pi_from_bar(index_bar, r, 1);
    if (w) return w;
    if (!prev_index_bar) return std::nullopt;
    // Two-period fallback: anchor from the previous period, extremes over
    // both periods, rate doubled.
    return pi_from_bar(two_period_bar(*prev_index_bar, index_bar), r + prev_r, 2);
}

double put_price(const PeriodBar& stock_bar, const RiskNeutralWeight& w, double delta) {
    double strike = stock_bar.anchor_close * (1.0 + delta);
    double payoff_up = std::max(strike - stock_bar.high_close, 0.0);
    double payoff_down = std::max(strike - stock_bar.low_close, 0.0);
    return (w.pi * payoff_up + (1.0 - w.pi) * payoff_down) / w.one_plus_r_eff;
}

double call_price(const PeriodBar& stock_bar, const RiskNeutralWeight& w, double delta) {
    double strike = stock_bar.anchor_close * (1.0 + delta);
    double payoff_up = std::max(stock_bar.high_close - strike, 0.0);
    double payoff_down = std::max(stock_bar.low_close - strike, 0.0);
    return (w.pi * payoff_up + (1.0 - w.pi) * payoff_down) / w.one_plus_r_eff;
}

double p_index(double put, double strike, const RiskNeutralWeight& w, double delta) {
    if (strike <= 0.0) throw DomainError("p_index: strike must be positive");
    double v = put / strike;
    double upper = 1.0 / w.one_plus_r_eff;
    double lower = std::max(upper - 1.0 / (1.0 + delta), 0.0);
    if (v < lower - 1e-12 || v >= upper) {
        throw InternalError("p-index bound violation: v=" + std::to_string(v) +
                            " outside [" + std::to_string(lower) + ", " +
                            std::to_string(upper) + ")");
    }
    return v;
}

double p_index_closed_form(double down_factor, double delta, const RiskNeutralWeight& w) {
    if (down_factor > 1.0 + delta) {
        throw DomainError("p_index_closed_form requires d <= 1 + delta");
    }
    return ((1.0 + delta) - down_factor) / (1.0 + delta) * (1.0 - w.pi) / w.one_plus_r_eff;
}

double p_ratio(double realized_return, double r, double v) {
    if (v <= 0.0) throw DomainError("p_ratio requires a positive p-index");
    return (realized_return - r) / v;
}

std::vector<double> modified_p_ratio(std::span<const double> returns,
                                     std::span<const double> v, double epsilon) {
    if (returns.size() != v.size())
        throw DomainError("modified_p_ratio: size mismatch");
    if (returns.size() < 2)
        throw DomainError("modified_p_ratio needs at least 2 observations");
    auto [rmin_it, rmax_it] = std::minmax_element(returns.begin(), returns.end());
    auto [vmin_it, vmax_it] = std::minmax_element(v.begin(), v.end());
    double r_span = *rmax_it - *rmin_it;
    double v_span = *vmax_it - *vmin_it;
    if (r_span == 0.0 || v_span == 0.0)
        throw DomainError("modified_p_ratio: degenerate cross-section");
    std::vector<double> out(returns.size());
    for (size_t i = 0; i < returns.size(); ++i) {
        double rn = (returns[i] - *rmin_it) / r_span;
        double vn = (v[i] - *vmin_it) / v_span;
        out[i] = rn / (vn + epsilon);
    }
    return out;
}

double portfolio_p_index(std::span<const double> weights, std::span<const double> v) {
    if (weights.size() != v.size())
        throw ValidationError("portfolio_p_index: size mismatch");
    double sum = 0.0, dot = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < -1e-12)
            throw ValidationError("portfolio_p_index: negative weight");
        sum += weights[i];
        dot += weights[i] * v[i];
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("portfolio_p_index: weights must sum to 1");
    return dot;
}

double value_weighted_p_index(std::span<const double> puts,
                              std::span<const double> anchors, double delta) {
    if (puts.empty() || puts.size() != anchors.size())
        throw DomainError("value_weighted_p_index: empty or mismatched inputs");
    double put_sum = 0.0, anchor_sum = 0.0;
    for (size_t i = 0; i < puts.size(); ++i) {
        if (anchors[i] <= 0.0)
            throw DomainError("value_weighted_p_index: anchors must be positive");
        put_sum += puts[i];
        anchor_sum += anchors[i];
    }
    return put_sum / ((1.0 + delta) * anchor_sum);
}

std::string to_string(SkipReason r) {
    switch (r) {
        case SkipReason::None: return "none";
        case SkipReason::DegenerateIndex: return "degenerate_index";
        case SkipReason::InvalidPi: return "invalid_pi";
        case SkipReason::NonPositivePut: return "nonpositive_put";
        case SkipReason::DegenerateStock: return "degenerate_stock";
    }
    return "unknown";
}

RecordOutcome compute_record(const PeriodBar& stock_bar, const PeriodBar* prev_stock_bar,
                             const PeriodBar& index_bar, const PeriodBar* prev_index_bar,
                             double r, double prev_r, const DeltaPolicy& delta_policy) {
    std::optional<RiskNeutralWeight> w;
    try {
        w = estimate_pi(index_bar, r, prev_index_bar, prev_r);
    } catch (const EstimationError&) {
        return {std::nullopt, SkipReason::DegenerateIndex};
    }
    if (!w) return {std::nullopt, SkipReason::InvalidPi};

    double delta = delta_policy.resolve(r);
    const PeriodBar* pricing_bar = &stock_bar;
    PeriodBar fallback_bar;
    RiskNeutralWeight weight = *w;

    double put = put_price(*pricing_bar, weight, delta);
    if (put <= 0.0) {
        // Put fallback: reprice on the two-period stock window with the
        // two-period weight.
        if (!prev_stock_bar || !prev_index_bar)
            return {std::nullopt, SkipReason::NonPositivePut};
        std::optional<RiskNeutralWeight> w2;
        if (weight.window_periods == 2) {
            w2 = weight;
        } else {
            try {
                w2 = estimate_pi(two_period_bar(*prev_index_bar, index_bar), r + prev_r);
            } catch (const EstimationError&) {
                return {std::nullopt, SkipReason::DegenerateIndex};
            }
        }
        if (!w2) return {std::nullopt, SkipReason::InvalidPi};
        weight = *w2;
        weight.window_periods = 2;
        fallback_bar = two_period_bar(*prev_stock_bar, stock_bar);
        pricing_bar = &fallback_bar;
        put = put_price(*pricing_bar, weight, delta);
        if (put <= 0.0) return {std::nullopt, SkipReason::NonPositivePut};
    }

    PIndexRecord rec;
    rec.symbol = stock_bar.symbol;
    rec.period = stock_bar.period;
    rec.delta = delta;
    rec.strike = pricing_bar->anchor_close * (1.0 + delta);
    rec.put_price = put;
    rec.p_index = p_index(put, rec.strike, weight, delta);
    rec.realized_return = stock_bar.period_return();
    rec.p_ratio = p_ratio(rec.realized_return, r, rec.p_index);
    rec.window_periods = std::max(weight.window_periods, pricing_bar == &fallback_bar ? 2 : 1);
    return {rec, SkipReason::None};
}

}  // namespace pfrontier
