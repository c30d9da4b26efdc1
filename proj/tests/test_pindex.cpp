#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pfrontier/market_data.hpp"
#include "pfrontier/pindex.hpp"
#include "pfrontier/types.hpp"

using namespace pfrontier;

namespace {

PeriodBar make_bar(double anchor, double high, double low, double last,
                   int period_index = 201402) {
    PeriodBar b;
    b.symbol = "X";
    b.period = {Calendar::Weekly, period_index};
    b.anchor_close = anchor;
    b.high_close = high;
    b.low_close = low;
    b.last_close = last;
    b.first_date = Date{2014, 1, 6};
    b.last_date = Date{2014, 1, 10};
    return b;
}

// A draw with pi guaranteed interior: d < 1+r < u and d < 1+delta < u.
struct Draw {
    double s0, u, d, r, delta;
};

Draw random_draw(std::mt19937& rng) {
    std::uniform_real_distribution<double> s0(5.0, 500.0);
    std::uniform_real_distribution<double> dd(0.80, 0.99);
    std::uniform_real_distribution<double> uu(1.02, 1.35);
    Draw x;
    x.s0 = s0(rng);
    x.d = dd(rng);
    x.u = uu(rng);
    std::uniform_real_distribution<double> rr(x.d - 1.0 + 1e-3, x.u - 1.0 - 1e-3);
    x.r = rr(rng);
    x.delta = rr(rng);
    return x;
}

}  // namespace

TEST_CASE("estimate_pi hand value") {
    PeriodBar index = make_bar(100.0, 110.0, 95.0, 105.0);
    auto w = estimate_pi(index, 0.01);
    REQUIRE(w.has_value());
    CHECK(w->pi == doctest::Approx(0.4).epsilon(1e-12));  // (1.01-0.95)/0.15
    CHECK(w->one_plus_r_eff == doctest::Approx(1.01));
    CHECK(w->window_periods == 1);
}

TEST_CASE("estimate_pi falls back to the two-period window") {
    // Monotone-up index: d = 1 > is not the issue, u = 1.002 < 1+r kills pi.
    PeriodBar index = make_bar(100.0, 100.2, 100.0, 100.2);
    PeriodBar prev = make_bar(95.0, 101.0, 94.0, 100.0, 201401);
    CHECK(!estimate_pi(index, 0.01).has_value());
    auto w = estimate_pi(index, 0.01, &prev, 0.01);
    REQUIRE(w.has_value());
    CHECK(w->window_periods == 2);
    // merged window: anchor 95, extremes over both periods
    double u = 101.0 / 95.0, d = 94.0 / 95.0;
    CHECK(w->pi == doctest::Approx((1.02 - d) / (u - d)).epsilon(1e-12));
    CHECK(w->one_plus_r_eff == doctest::Approx(1.02));
}

TEST_CASE("estimate_pi returns nullopt when the fallback also fails") {
    PeriodBar index = make_bar(100.0, 100.1, 100.0, 100.1);
    PeriodBar prev = make_bar(99.9, 100.05, 99.9, 100.0, 201401);
    CHECK(!estimate_pi(index, 0.05, &prev, 0.05).has_value());
}

TEST_CASE("estimate_pi throws on a flat window") {
    PeriodBar index = make_bar(100.0, 100.0, 100.0, 100.0);
    CHECK_THROWS_AS(estimate_pi(index, 0.01), EstimationError);
}

TEST_CASE("put_price hand value") {
    // S0=100, u=1.1, d=0.95, r=0.01 -> pi=0.4; delta=0.01 -> K=101.
    PeriodBar stock = make_bar(100.0, 110.0, 95.0, 105.0);
    RiskNeutralWeight w{0.4, 1.01, 1};
    // p = [0.4*0 + 0.6*(101-95)] / 1.01
    CHECK(put_price(stock, w, 0.01) == doctest::Approx(3.6 / 1.01).epsilon(1e-12));
}

TEST_CASE("put-call parity and closed form agree on random draws") {
    std::mt19937 rng(2024);
    for (int i = 0; i < 2000; ++i) {
        Draw x = random_draw(rng);
        PeriodBar stock = make_bar(x.s0, x.s0 * x.u, x.s0 * x.d, x.s0);
        RiskNeutralWeight w;
        w.pi = (1.0 + x.r - x.d) / (x.u - x.d);
        w.one_plus_r_eff = 1.0 + x.r;
        double p = put_price(stock, w, x.delta);
        double c = call_price(stock, w, x.delta);
        double strike = x.s0 * (1.0 + x.delta);
        CHECK(std::abs(c + strike / (1.0 + x.r) - (x.s0 + p)) <= 1e-9 * x.s0);

        double v = p_index(p, strike, w, x.delta);
        double v_closed = p_index_closed_form(x.d, x.delta, w);
        CHECK(v == doctest::Approx(v_closed).epsilon(1e-12));
        CHECK(v >= std::max(1.0 / (1.0 + x.r) - 1.0 / (1.0 + x.delta), 0.0) - 1e-12);
        CHECK(v < 1.0 / (1.0 + x.r));
    }
}

TEST_CASE("p_index rejects out-of-bounds values") {
    RiskNeutralWeight w{0.4, 1.01, 1};
    CHECK_THROWS_AS(p_index(200.0, 101.0, w, 0.01), InternalError);
}

TEST_CASE("p_index_closed_form domain") {
    RiskNeutralWeight w{0.4, 1.01, 1};
    CHECK(p_index_closed_form(1.01, 0.01, w) == doctest::Approx(0.0));  // d = 1+delta
    CHECK_THROWS_AS(p_index_closed_form(1.05, 0.01, w), DomainError);
}

TEST_CASE("p_ratio") {
    CHECK(p_ratio(0.05, 0.01, 0.02) == doctest::Approx(2.0));
    CHECK_THROWS_AS(p_ratio(0.05, 0.01, 0.0), DomainError);
}

TEST_CASE("modified_p_ratio normalizes both axes") {
    std::vector<double> R = {0.0, 0.05, 0.10};
    std::vector<double> v = {0.01, 0.02, 0.03};
    auto m = modified_p_ratio(R, v, 1e-4);
    REQUIRE(m.size() == 3);
    CHECK(m[0] == doctest::Approx(0.0));
    CHECK(m[1] == doctest::Approx(0.5 / (0.5 + 1e-4)));
    CHECK(m[2] == doctest::Approx(1.0 / (1.0 + 1e-4)));
}

TEST_CASE("modified_p_ratio rejects a degenerate cross-section") {
    std::vector<double> R = {0.1, 0.1};
    std::vector<double> v = {0.01, 0.02};
    CHECK_THROWS_AS(modified_p_ratio(R, v), DomainError);
}

TEST_CASE("portfolio p-index aggregations") {
    std::vector<double> w = {0.25, 0.75};
    std::vector<double> v = {0.02, 0.04};
    CHECK(portfolio_p_index(w, v) == doctest::Approx(0.035));
    std::vector<double> bad = {0.25, 0.70};
    CHECK_THROWS_AS(portfolio_p_index(bad, v), ValidationError);

    std::vector<double> puts = {1.0, 2.0};
    std::vector<double> anchors = {100.0, 100.0};
    CHECK(value_weighted_p_index(puts, anchors, 0.01) ==
          doctest::Approx(3.0 / (1.01 * 200.0)));
}

TEST_CASE("two_period_bar merges anchor and extremes") {
    PeriodBar prev = make_bar(90.0, 102.0, 88.0, 100.0, 201401);
    PeriodBar cur = make_bar(100.0, 104.0, 97.0, 103.0, 201402);
    PeriodBar merged = two_period_bar(prev, cur);
    CHECK(merged.anchor_close == doctest::Approx(90.0));
    CHECK(merged.high_close == doctest::Approx(104.0));
    CHECK(merged.low_close == doctest::Approx(88.0));
    CHECK(merged.last_close == doctest::Approx(103.0));
    CHECK(merged.period.index == 201402);
    CHECK(merged.first_date == prev.first_date);
}

TEST_CASE("compute_record happy path") {
    PeriodBar index = make_bar(3000.0, 3300.0, 2850.0, 3100.0);
    PeriodBar stock = make_bar(100.0, 110.0, 95.0, 105.0);
    DeltaPolicy policy;  // delta = r
    auto out = compute_record(stock, nullptr, index, nullptr, 0.01, 0.0, policy);
    REQUIRE(out.record.has_value());
    const auto& rec = *out.record;
    CHECK(rec.window_periods == 1);
    CHECK(rec.delta == doctest::Approx(0.01));
    CHECK(rec.strike == doctest::Approx(101.0));
    CHECK(rec.put_price == doctest::Approx(3.6 / 1.01).epsilon(1e-12));
    CHECK(rec.p_index == doctest::Approx(rec.put_price / 101.0).epsilon(1e-12));
    CHECK(rec.realized_return == doctest::Approx(0.05));
    CHECK(rec.p_ratio == doctest::Approx((0.05 - 0.01) / rec.p_index).epsilon(1e-9));
}

TEST_CASE("compute_record pi fallback marks a two-period window") {
    PeriodBar index = make_bar(100.0, 100.2, 100.0, 100.2);
    PeriodBar prev_index = make_bar(95.0, 101.0, 94.0, 100.0, 201401);
    PeriodBar stock = make_bar(50.0, 55.0, 47.0, 52.0);
    PeriodBar prev_stock = make_bar(48.0, 51.0, 46.0, 50.0, 201401);
    DeltaPolicy policy;
    auto out = compute_record(stock, &prev_stock, index, &prev_index, 0.01, 0.01, policy);
    REQUIRE(out.record.has_value());
    CHECK(out.record->window_periods == 2);
    // realized return still comes from the current period alone
    CHECK(out.record->realized_return == doctest::Approx(0.04));

    auto no_prev = compute_record(stock, nullptr, index, nullptr, 0.01, 0.0, policy);
    CHECK(!no_prev.record.has_value());
    CHECK(no_prev.skip == SkipReason::InvalidPi);
}

TEST_CASE("compute_record put fallback triggers independently") {
    PeriodBar index = make_bar(3000.0, 3300.0, 2850.0, 3100.0);  // pi fine
    // stock never dips below the strike: single-period put is worthless
    PeriodBar stock = make_bar(100.0, 112.0, 103.0, 110.0);
    PeriodBar prev_stock = make_bar(98.0, 101.0, 92.0, 100.0, 201401);
    DeltaPolicy policy;

    auto no_prev = compute_record(stock, nullptr, index, nullptr, 0.01, 0.0, policy);
    CHECK(!no_prev.record.has_value());
    CHECK(no_prev.skip == SkipReason::NonPositivePut);

    PeriodBar prev_index = make_bar(2900.0, 3250.0, 2800.0, 3000.0, 201401);
    auto out = compute_record(stock, &prev_stock, index, &prev_index, 0.01, 0.01, policy);
    REQUIRE(out.record.has_value());
    CHECK(out.record->window_periods == 2);
    CHECK(out.record->put_price > 0.0);
}

TEST_CASE("compute_record fixed delta policy") {
    PeriodBar index = make_bar(3000.0, 3300.0, 2850.0, 3100.0);
    PeriodBar stock = make_bar(100.0, 110.0, 95.0, 105.0);
    DeltaPolicy policy;
    policy.fixed_delta = 0.05;
    auto out = compute_record(stock, nullptr, index, nullptr, 0.01, 0.0, policy);
    REQUIRE(out.record.has_value());
    CHECK(out.record->delta == doctest::Approx(0.05));
    CHECK(out.record->strike == doctest::Approx(105.0));
}

TEST_CASE("v is decreasing in d and increasing in delta") {
    std::mt19937 rng(7);
    for (int i = 0; i < 500; ++i) {
        Draw x = random_draw(rng);
        RiskNeutralWeight w;
        w.one_plus_r_eff = 1.0 + x.r;
        double h = 1e-6;
        auto v_of = [&](double d, double delta) {
            RiskNeutralWeight wd = w;
            wd.pi = (1.0 + x.r - d) / (x.u - d);
            return p_index_closed_form(d, delta, wd);
        };
        if (x.d - h <= 0.0 || x.d + h >= 1.0 + x.delta) continue;
        double dv_dd = (v_of(x.d + h, x.delta) - v_of(x.d - h, x.delta)) / (2 * h);
        double dv_ddelta = (v_of(x.d, x.delta + h) - v_of(x.d, x.delta - h)) / (2 * h);
        CHECK(dv_dd < 0.0);
        CHECK(dv_ddelta > 0.0);
    }
}
