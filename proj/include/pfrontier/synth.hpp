#ifndef PFRONTIER_SYNTH_HPP
#define PFRONTIER_SYNTH_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pfrontier/factor_lab.hpp"
#include "pfrontier/market_data.hpp"

namespace pfrontier {

// ---------------------------------------------------------------------------
// Deterministic synthetic panels for desk-scale runs and acceptance tests.
// ---------------------------------------------------------------------------

struct SynthRegime {
    Calendar calendar = Calendar::Monthly;
    double daily_drift = 0.0004;
    double daily_vol = 0.015;       // 0 => constant closes
    double intraday_range = 0.004;  // extends high/low beyond open/close
    double annual_rate = 0.03;
    double lambda_mkt = 0.005;      // planted mean of the market factor
    double factor_vol = 0.02;
};

SynthRegime parse_regime(const std::map<std::string, std::string>& kv);

struct SyntheticTruth {
    double lambda_mkt = 0.0;
    double annual_rate = 0.0;
    std::map<std::string, double> stock_drift;
};

struct SyntheticPanel {
    std::vector<DailyBar> bars;  // stocks S000.. plus the INDEX symbol
    std::vector<RatePoint> rates;
    std::vector<FactorObservation> factors;
    SyntheticTruth truth;
    std::string index_symbol = "INDEX";
};

/// Deterministic for a fixed seed; all prices strictly positive.
SyntheticPanel generate_synthetic_panel(std::uint64_t seed, std::size_t n_stocks,
                                        std::size_t n_periods,
                                        const SynthRegime& regime = {});

// ---------------------------------------------------------------------------
// Planted-factor economy for the two-stage regressions.
// ---------------------------------------------------------------------------

struct FactorEconomyTruth {
    // Planted mean factor returns: characteristic, mkt_rf, smb, hml, rmw, cma.
    std::array<double, 6> lambda{};
    std::map<std::string, std::array<double, 6>> loadings;
};

struct FactorEconomy {
    StockMonthPanel panel;
    FactorEconomyTruth truth;
};

/// Stock excess returns follow the planted loadings exactly up to `noise_sd`
/// idiosyncratic noise; factor draws have the planted means.
FactorEconomy generate_factor_economy(std::uint64_t seed, std::size_t n_stocks,
                                      std::size_t n_months,
                                      const std::array<double, 6>& lambda,
                                      double noise_sd);

}  // namespace pfrontier

#endif
