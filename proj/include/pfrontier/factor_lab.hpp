#ifndef PFRONTIER_FACTOR_LAB_HPP
#define PFRONTIER_FACTOR_LAB_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pfrontier/market_data.hpp"
#include "pfrontier/types.hpp"

namespace pfrontier {

// ---------------------------------------------------------------------------
// Decile portfolios.
// ---------------------------------------------------------------------------

struct DecileAssignment {
    int month_id = 0;
    int portfolio_id = 0;  // 1 = L (lowest characteristic) .. 10 = H
    std::vector<std::string> members;
    double formation_v_mean = 0.0;
    double formation_v2_mean = 0.0;
};

/// Ranks the characteristic from high to low and splits into 10 near-equal
/// groups (larger groups at the high end); ties break on symbol order.
std::vector<DecileAssignment> form_deciles(
    std::span<const std::pair<std::string, double>> cross_section, int month_id);

/// Equal-weight mean of member returns per portfolio; members without a
/// return are dropped, a portfolio with no survivors yields nullopt.
std::vector<std::optional<double>> decile_returns(
    std::span<const DecileAssignment> assignments,
    const std::map<std::string, double>& next_month_returns);

/// Elementwise long - short; series must be aligned (equal length).
std::vector<double> spread_portfolio(std::span<const double> long_series,
                                     std::span<const double> short_series);

// ---------------------------------------------------------------------------
// Regression machinery.
// ---------------------------------------------------------------------------

struct OlsFit {
    std::vector<double> coefficients;
    std::vector<double> residuals;
};

/// Least squares of y on the rows of X (row-major, includes any intercept
/// column the caller wants). Throws DomainError on rank deficiency.
OlsFit ols(std::span<const double> y, const std::vector<std::vector<double>>& X);

struct NwStat {
    double mean = 0.0;
    double tstat = 0.0;
    double pvalue = 1.0;
};

/// Newey-West t-statistic of a series mean: Bartlett-weighted long-run
/// variance with population autocovariances (divide by T). Zero variance
/// yields an infinite-t sentinel with p = 0 (or t = 0 for a zero mean).
NwStat newey_west_tstat(std::span<const double> series, int lags);

struct RegressionEstimate {
    std::vector<std::string> names;
    std::vector<double> coefficients;
    std::vector<double> tstats;
    std::vector<double> pvalues;
    int lags = 0;
    size_t n_obs = 0;
};

/// OLS with Newey-West (Bartlett) HAC coefficient covariance.
RegressionEstimate hac_ols(std::span<const double> y,
                           const std::vector<std::vector<double>>& X,
                           std::vector<std::string> names, int lags);

// ---------------------------------------------------------------------------
// Cross-sectional pricing tests.
// ---------------------------------------------------------------------------

/// One month of the decile panel for the two-parameter regression.
struct FmMonth {
    int month_id = 0;
    std::vector<double> returns;  // R_pt per portfolio
    std::vector<double> v_mean;   // lagged mean p-index per portfolio
    std::vector<double> v2_mean;  // lagged mean squared p-index
};

/// Per-month cross-sectional OLS of portfolio returns on lagged v and v^2;
/// reports time-series means of (gamma0, gamma1, gamma2) with NW t-stats.
/// Months with a degenerate cross-section are dropped (warning recorded).
RegressionEstimate fama_macbeth_two_param(std::span<const FmMonth> months, int lags = 4,
                                          std::vector<std::string>* warnings = nullptr);

/// Time-series OLS of portfolio excess returns on the five factors; the
/// intercept is the FF5 alpha. Series must be aligned month by month.
RegressionEstimate ff5_alpha(std::span<const double> excess_returns,
                             std::span<const FactorObservation> factors, int lags = 4);

// ---------------------------------------------------------------------------
// Two-stage six-factor model.
// ---------------------------------------------------------------------------

struct StockMonthPanel {
    std::vector<int> months;  // sorted month ids
    std::map<std::string, std::map<int, double>> excess_returns;
    std::map<std::string, std::map<int, double>> characteristic;  // v or modified p-ratio
    std::map<int, FactorObservation> factors;
};

struct TwoStageResult {
    RegressionEstimate lambdas;  // characteristic first (when included), then 5 factors
    size_t months_used = 0;
    bool characteristic_identified = false;
    std::vector<std::string> warnings;
};

/// Stage 1: per-stock expanding-window (>= min_window months, through t-1)
/// OLS of excess returns on intercept, own characteristic, and the five
/// factors. Stage 2: per-month cross-sectional OLS of excess returns on the
/// lagged stage-1 betas. Reports mean lambdas with NW t-stats.
TwoStageResult two_stage_six_factor(const StockMonthPanel& panel,
                                    bool include_characteristic, int lags = 4,
                                    size_t min_window = 8);

}  // namespace pfrontier

#endif
