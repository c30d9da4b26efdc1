#include "pfrontier/factor_lab.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pfrontier {

namespace {

double normal_two_sided_pvalue(double t) {
    return std::erfc(std::abs(t) / std::sqrt(2.0));
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& X) {
    if (X.empty()) throw DomainError("ols: empty design");
    Eigen::MatrixXd M(static_cast<Eigen::Index>(X.size()),
                      static_cast<Eigen::Index>(X[0].size()));
    for (size_t i = 0; i < X.size(); ++i) {
        if (X[i].size() != X[0].size()) throw DomainError("ols: ragged design matrix");
        for (size_t j = 0; j < X[i].size(); ++j)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = X[i][j];
    }
    return M;
}

}  // namespace

std::vector<DecileAssignment> form_deciles(
    std::span<const std::pair<std::string, double>> cross_section, int month_id) {
    const size_t n = cross_section.size();
    if (n < 10) throw DomainError("form_deciles requires at least 10 symbols, got " +
                                  std::to_string(n));
    std::vector<std::pair<std::string, double>> sorted(cross_section.begin(),
                                                       cross_section.end());
    // High to low; ties keep symbol order.
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    std::vector<DecileAssignment> out;
    size_t base = n / 10, rem = n % 10;
    size_t pos = 0;
    for (int g = 0; g < 10; ++g) {
        // Larger groups at the high-characteristic end.
        size_t size = base + (static_cast<size_t>(g) < rem ? 1 : 0);
        DecileAssignment a;
        a.month_id = month_id;
        a.portfolio_id = 10 - g;  // first group holds the highest values = H
        double vsum = 0.0, v2sum = 0.0;
        for (size_t k = 0; k < size; ++k, ++pos) {
            a.members.push_back(sorted[pos].first);
            vsum += sorted[pos].second;
            v2sum += sorted[pos].second * sorted[pos].second;
        }
        a.formation_v_mean = vsum / static_cast<double>(size);
        a.formation_v2_mean = v2sum / static_cast<double>(size);
        out.push_back(std::move(a));
    }
    std::sort(out.begin(), out.end(), [](const DecileAssignment& a, const DecileAssignment& b) {
        return a.portfolio_id < b.portfolio_id;
    });
    return out;
}

std::vector<std::optional<double>> decile_returns(
    std::span<const DecileAssignment> assignments,
    const std::map<std::string, double>& next_month_returns) {
    std::vector<std::optional<double>> out(10);
    for (const auto& a : assignments) {
        double sum = 0.0;
        size_t count = 0;
        for (const auto& m : a.members) {
            auto it = next_month_returns.find(m);
            if (it == next_month_returns.end()) continue;
            sum += it->second;
            ++count;
        }
        if (count > 0) out[static_cast<size_t>(a.portfolio_id - 1)] = sum / static_cast<double>(count);
    }
    return out;
}

std::vector<double> spread_portfolio(std::span<const double> long_series,
                                     std::span<const double> short_series) {
    if (long_series.size() != short_series.size())
        throw DomainError("spread_portfolio: misaligned series");
    std::vector<double> out(long_series.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = long_series[i] - short_series[i];
    return out;
}

OlsFit ols(std::span<const double> y, const std::vector<std::vector<double>>& X) {
    if (y.size() != X.size()) throw DomainError("ols: y and X row counts differ");
    Eigen::MatrixXd M = to_matrix(X);
    if (M.rows() <= M.cols()) throw DomainError("ols: more regressors than observations");
    Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(1e-10);
    if (qr.rank() < M.cols()) throw DomainError("ols: singular design matrix");
    Eigen::VectorXd b = qr.solve(yv);
    Eigen::VectorXd resid = yv - M * b;

    OlsFit fit;
    fit.coefficients.assign(b.data(), b.data() + b.size());
    fit.residuals.assign(resid.data(), resid.data() + resid.size());
    return fit;
}

NwStat newey_west_tstat(std::span<const double> series, int lags) {
    const size_t T = series.size();
    if (lags < 0) throw DomainError("newey_west_tstat: negative lag count");
    if (T <= static_cast<size_t>(lags) + 1)
        throw DomainError("newey_west_tstat: series too short for " +
                          std::to_string(lags) + " lags");
    double mean = 0.0;
    for (double x : series) mean += x;
    mean /= static_cast<double>(T);

    // Population-convention autocovariances (divide by T).
    auto gamma = [&](int j) {
        double s = 0.0;
        for (size_t t = static_cast<size_t>(j); t < T; ++t)
            s += (series[t] - mean) * (series[t - static_cast<size_t>(j)] - mean);
        return s / static_cast<double>(T);
    };

    double S = gamma(0);
    for (int j = 1; j <= lags; ++j)
        S += 2.0 * (1.0 - static_cast<double>(j) / (lags + 1.0)) * gamma(j);

    NwStat st;
    st.mean = mean;
    // Rounding noise from a constant series still counts as zero variance.
    if (S <= 1e-24 * std::max(1.0, mean * mean)) {
        if (mean == 0.0) {
            st.tstat = 0.0;
            st.pvalue = 1.0;
        } else {
            st.tstat = std::copysign(std::numeric_limits<double>::infinity(), mean);
            st.pvalue = 0.0;
        }
        return st;
    }
    st.tstat = mean / std::sqrt(S / static_cast<double>(T));
    st.pvalue = normal_two_sided_pvalue(st.tstat);
    return st;
}

RegressionEstimate hac_ols(std::span<const double> y,
                           const std::vector<std::vector<double>>& X,
                           std::vector<std::string> names, int lags) {
    OlsFit fit = ols(y, X);
    const size_t T = X.size();
    const size_t k = X[0].size();
    Eigen::MatrixXd M = to_matrix(X);
    Eigen::Map<const Eigen::VectorXd> e(fit.residuals.data(),
                                        static_cast<Eigen::Index>(T));

    Eigen::MatrixXd xtx = M.transpose() * M / static_cast<double>(T);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                              static_cast<Eigen::Index>(k));
    for (size_t t = 0; t < T; ++t) {
        Eigen::VectorXd xt = M.row(static_cast<Eigen::Index>(t)).transpose();
        S += e(static_cast<Eigen::Index>(t)) * e(static_cast<Eigen::Index>(t)) * xt *
             xt.transpose();
    }
    for (int j = 1; j <= lags; ++j) {
        double w = 1.0 - static_cast<double>(j) / (lags + 1.0);
        for (size_t t = static_cast<size_t>(j); t < T; ++t) {
            Eigen::VectorXd xt = M.row(static_cast<Eigen::Index>(t)).transpose();
            Eigen::VectorXd xl = M.row(static_cast<Eigen::Index>(t - static_cast<size_t>(j)))
                                     .transpose();
            Eigen::MatrixXd cross = e(static_cast<Eigen::Index>(t)) *
                                    e(static_cast<Eigen::Index>(t - static_cast<size_t>(j))) *
                                    xt * xl.transpose();
            S += w * (cross + cross.transpose());
        }
    }
    S /= static_cast<double>(T);
    Eigen::MatrixXd xtx_inv = xtx.inverse();
    Eigen::MatrixXd V = xtx_inv * S * xtx_inv / static_cast<double>(T);

    RegressionEstimate est;
    est.names = std::move(names);
    est.coefficients = fit.coefficients;
    est.lags = lags;
    est.n_obs = T;
    for (size_t j = 0; j < k; ++j) {
        double var = V(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
        double b = fit.coefficients[j];
        if (var <= 0.0) {
            est.tstats.push_back(b == 0.0
                                     ? 0.0
                                     : std::copysign(std::numeric_limits<double>::infinity(), b));
            est.pvalues.push_back(b == 0.0 ? 1.0 : 0.0);
        } else {
            double t = b / std::sqrt(var);
            est.tstats.push_back(t);
            est.pvalues.push_back(normal_two_sided_pvalue(t));
        }
    }
    return est;
}

RegressionEstimate fama_macbeth_two_param(std::span<const FmMonth> months, int lags,
                                          std::vector<std::string>* warnings) {
    std::vector<double> g0, g1, g2;
    for (const auto& m : months) {
        const size_t n = m.returns.size();
        if (n < 3 || m.v_mean.size() != n || m.v2_mean.size() != n)
            throw DomainError("fama_macbeth_two_param: month " + std::to_string(m.month_id) +
                              " needs >= 3 aligned portfolios");
        std::vector<std::vector<double>> X(n, std::vector<double>(3));
        for (size_t p = 0; p < n; ++p) {
            X[p][0] = 1.0;
            X[p][1] = m.v_mean[p];
            X[p][2] = m.v2_mean[p];
        }
        try {
            OlsFit fit = ols(m.returns, X);
            g0.push_back(fit.coefficients[0]);
            g1.push_back(fit.coefficients[1]);
            g2.push_back(fit.coefficients[2]);
        } catch (const DomainError&) {
            if (warnings)
                warnings->push_back("month " + std::to_string(m.month_id) +
                                    " dropped: singular cross-section");
        }
    }
    if (g0.size() <= static_cast<size_t>(lags) + 1)
        throw DomainError("fama_macbeth_two_param: too few usable months");

    RegressionEstimate est;
    est.names = {"gamma0", "gamma1", "gamma2"};
    est.lags = lags;
    est.n_obs = g0.size();
    for (const auto* series : {&g0, &g1, &g2}) {
        NwStat st = newey_west_tstat(*series, lags);
        est.coefficients.push_back(st.mean);
        est.tstats.push_back(st.tstat);
        est.pvalues.push_back(st.pvalue);
    }
    return est;
}

RegressionEstimate ff5_alpha(std::span<const double> excess_returns,
                             std::span<const FactorObservation> factors, int lags) {
    if (excess_returns.size() != factors.size())
        throw DomainError("ff5_alpha: misaligned series");
    if (excess_returns.size() < 7)
        throw DomainError("ff5_alpha needs at least 7 observations");
    std::vector<std::vector<double>> X(excess_returns.size(), std::vector<double>(6));
    for (size_t t = 0; t < factors.size(); ++t) {
        X[t] = {1.0, factors[t].mkt_rf, factors[t].smb, factors[t].hml, factors[t].rmw,
                factors[t].cma};
    }
    return hac_ols(excess_returns, X, {"alpha", "mkt_rf", "smb", "hml", "rmw", "cma"}, lags);
}

TwoStageResult two_stage_six_factor(const StockMonthPanel& panel,
                                    bool include_characteristic, int lags,
                                    size_t min_window) {
    TwoStageResult result;
    const auto& months = panel.months;
    const size_t n_factor_cols = include_characteristic ? 6u : 5u;

    // Per-coefficient lambda time series (aligned per coefficient, not
    // across coefficients: the characteristic column may drop out in a month
    // without cross-sectional spread).
    std::vector<std::vector<double>> lambda_series(n_factor_cols);

    for (size_t ti = 0; ti < months.size(); ++ti) {
        int month = months[ti];

        // Stage 1: expanding-window betas through t-1.
        std::map<std::string, std::vector<double>> betas;  // stock -> (b_c?, b1..b5)
        for (const auto& [symbol, rets] : panel.excess_returns) {
            std::vector<double> y;
            std::vector<std::vector<double>> X;
            for (size_t wi = 0; wi < ti; ++wi) {
                int wm = months[wi];
                auto rit = rets.find(wm);
                auto fit = panel.factors.find(wm);
                if (rit == rets.end() || fit == panel.factors.end()) continue;
                double c = 0.0;
                if (include_characteristic) {
                    auto cs_it = panel.characteristic.find(symbol);
                    if (cs_it == panel.characteristic.end()) continue;
                    auto cit = cs_it->second.find(wm);
                    if (cit == cs_it->second.end()) continue;
                    c = cit->second;
                }
                const auto& f = fit->second;
                std::vector<double> row = {1.0};
                if (include_characteristic) row.push_back(c);
                row.insert(row.end(), {f.mkt_rf, f.smb, f.hml, f.rmw, f.cma});
                X.push_back(std::move(row));
                y.push_back(rit->second);
            }
            if (y.size() < min_window || y.size() <= n_factor_cols) continue;

            // A time-constant characteristic is collinear with the intercept;
            // drop it for this stock (beta 0, resolved cross-sectionally).
            bool char_col = include_characteristic;
            if (char_col) {
                double lo = X[0][1], hi = X[0][1];
                for (const auto& row : X) {
                    lo = std::min(lo, row[1]);
                    hi = std::max(hi, row[1]);
                }
                if (hi - lo < 1e-12) {
                    char_col = false;
                    for (auto& row : X) row.erase(row.begin() + 1);
                }
            }
            try {
                OlsFit fit1 = ols(y, X);
                std::vector<double> b(fit1.coefficients.begin() + 1,
                                      fit1.coefficients.end());
                if (include_characteristic && !char_col) b.insert(b.begin(), 0.0);
                betas[symbol] = std::move(b);
            } catch (const DomainError&) {
                // stock excluded this month
            }
        }

        // Stage 2: cross-sectional regression on the lagged betas.
        std::vector<double> y2;
        std::vector<std::vector<double>> X2;
        for (const auto& [symbol, b] : betas) {
            auto rit = panel.excess_returns.at(symbol).find(month);
            if (rit == panel.excess_returns.at(symbol).end()) continue;
            std::vector<double> row = {1.0};
            row.insert(row.end(), b.begin(), b.end());
            X2.push_back(std::move(row));
            y2.push_back(rit->second);
        }
        if (y2.size() <= n_factor_cols + 1) continue;

        // Drop the characteristic column when it has no cross-sectional
        // spread (lambda_v unidentified that month).
        bool char_included = include_characteristic;
        if (include_characteristic) {
            double lo = X2[0][1], hi = X2[0][1];
            for (const auto& row : X2) {
                lo = std::min(lo, row[1]);
                hi = std::max(hi, row[1]);
            }
            if (hi - lo < 1e-12) {
                char_included = false;
                for (auto& row : X2) row.erase(row.begin() + 1);
                result.warnings.push_back("month " + std::to_string(month) +
                                          ": characteristic beta has no spread");
            }
        }

        try {
            OlsFit fit2 = ols(y2, X2);
            size_t coef_offset = 1;  // skip intercept
            size_t out_col = 0;
            if (include_characteristic) {
                if (char_included) lambda_series[0].push_back(fit2.coefficients[coef_offset++]);
                out_col = 1;
            }
            for (size_t j = 0; j < 5; ++j)
                lambda_series[out_col + j].push_back(fit2.coefficients[coef_offset + j]);
            ++result.months_used;
        } catch (const DomainError&) {
            result.warnings.push_back("month " + std::to_string(month) +
                                      " dropped: singular cross-section");
        }
    }

    RegressionEstimate est;
    est.lags = lags;
    est.n_obs = result.months_used;
    if (include_characteristic) est.names.push_back("characteristic");
    for (const char* n : {"mkt_rf", "smb", "hml", "rmw", "cma"}) est.names.emplace_back(n);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (size_t j = 0; j < n_factor_cols; ++j) {
        const auto& series = lambda_series[j];
        if (series.size() <= static_cast<size_t>(lags) + 1) {
            est.coefficients.push_back(nan);
            est.tstats.push_back(nan);
            est.pvalues.push_back(nan);
            continue;
        }
        NwStat st = newey_west_tstat(series, lags);
        est.coefficients.push_back(st.mean);
        est.tstats.push_back(st.tstat);
        est.pvalues.push_back(st.pvalue);
        if (include_characteristic && j == 0) result.characteristic_identified = true;
    }
    result.lambdas = std::move(est);
    return result;
}

}  // namespace pfrontier
