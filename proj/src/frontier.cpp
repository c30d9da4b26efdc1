#include "pfrontier/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pfrontier {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kMatchTol = 1e-9;

// Dense two-phase simplex for: minimize c.w s.t. A w = b (m rows), w >= 0.
// Bland's rule keeps pivoting deterministic and cycle-free; the problems here
// have m = 2 and small n.
struct Simplex {
    size_t m, n;                       // rows, structural columns
    std::vector<std::vector<double>> a;  // m x (n + m), artificials appended
    std::vector<double> b;
    std::vector<size_t> basis;

    Simplex(const std::vector<std::vector<double>>& rows, std::vector<double> rhs)
        : m(rows.size()), n(rows[0].size()), b(std::move(rhs)) {
        a.assign(m, std::vector<double>(n + m, 0.0));
        for (size_t i = 0; i < m; ++i) {
            double sign = b[i] < 0.0 ? -1.0 : 1.0;
            b[i] *= sign;
            for (size_t j = 0; j < n; ++j) a[i][j] = sign * rows[i][j];
            a[i][n + i] = 1.0;
            basis.push_back(n + i);
        }
    }

    void pivot(size_t row, size_t col) {
        double piv = a[row][col];
        for (auto& x : a[row]) x /= piv;
        b[row] /= piv;
        a[row][col] = 1.0;
        for (size_t i = 0; i < m; ++i) {
            if (i == row) continue;
            double f = a[i][col];
            if (f == 0.0) continue;
            for (size_t j = 0; j < a[i].size(); ++j) a[i][j] -= f * a[row][j];
            b[i] -= f * b[row];
            a[i][col] = 0.0;
        }
        basis[row] = col;
    }

    // Minimizes cost over currently allowed columns. Returns optimal value.
    double run(const std::vector<double>& cost, size_t allowed_cols) {
        while (true) {
            // Reduced costs under the current basis.
            std::vector<double> y(m);  // simplex multipliers via basis costs
            // Compute reduced cost directly: r_j = c_j - c_B . (column j in
            // current tableau). The tableau is kept in canonical form, so the
            // column entries are the representation in the basis.
            size_t enter = allowed_cols;
            for (size_t j = 0; j < allowed_cols; ++j) {
                double cb = 0.0;
                for (size_t i = 0; i < m; ++i) cb += cost_of(cost, basis[i]) * a[i][j];
                double rj = cost_of(cost, j) - cb;
                if (rj < -kPivotTol) {
                    enter = j;  // Bland: first improving column
                    break;
                }
            }
            if (enter == allowed_cols) break;
            size_t leave = m;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < m; ++i) {
                if (a[i][enter] > kPivotTol) {
                    double ratio = b[i] / a[i][enter];
                    if (ratio < best_ratio - kPivotTol ||
                        (ratio < best_ratio + kPivotTol &&
                         (leave == m || basis[i] < basis[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == m) break;  // unbounded; cannot happen on a simplex
            pivot(leave, enter);
        }
        double z = 0.0;
        for (size_t i = 0; i < m; ++i) z += cost_of(cost, basis[i]) * b[i];
        return z;
    }

    static double cost_of(const std::vector<double>& cost, size_t j) {
        return j < cost.size() ? cost[j] : 0.0;
    }

    // Phase-1 objective: sum of artificial variables.
    double phase1() {
        std::vector<double> cost(n + m, 0.0);
        for (size_t i = 0; i < m; ++i) cost[n + i] = 1.0;
        return run(cost, n + m);
    }

    // Pivots any artificial variable still basic at zero onto a structural
    // column, so phase-2 row operations cannot push it positive again.
    void drive_out_artificials() {
        for (size_t i = 0; i < m; ++i) {
            if (basis[i] < n) continue;
            for (size_t j = 0; j < n; ++j) {
                if (std::abs(a[i][j]) > kPivotTol) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }
};

}  // namespace

LpSolution solve_lp(std::span<const double> objective, LpDirection direction,
                    std::span<const double> equality, double target) {
    size_t n = objective.size();
    if (n == 0 || equality.size() != n)
        throw DomainError("solve_lp: empty or mismatched coefficient vectors");

    double sign = direction == LpDirection::Minimize ? 1.0 : -1.0;

    std::vector<std::vector<double>> rows(2, std::vector<double>(n));
    for (size_t j = 0; j < n; ++j) {
        rows[0][j] = equality[j];
        rows[1][j] = 1.0;
    }
    Simplex sx(rows, {target, 1.0});
    if (sx.phase1() > 1e-9) return {false, {}, 0.0};
    sx.drive_out_artificials();

    std::vector<double> cost(n);
    for (size_t j = 0; j < n; ++j) cost[j] = sign * objective[j];
    double z = sign * sx.run(cost, n);

    LpSolution sol;
    sol.feasible = true;
    sol.value = z;
    sol.weights.assign(n, 0.0);
    for (size_t i = 0; i < sx.m; ++i) {
        if (sx.basis[i] < n) sol.weights[sx.basis[i]] = std::max(sx.b[i], 0.0);
    }

    // Canonical tie-break: fewest nonzero weights, then lexicographically
    // smallest support in input order. A basic feasible solution has at most
    // two nonzero weights, so scanning singletons then pairs is exhaustive.
    for (size_t i = 0; i < n; ++i) {
        if (std::abs(equality[i] - target) <= kMatchTol &&
            std::abs(objective[i] - z) <= kMatchTol) {
            std::fill(sol.weights.begin(), sol.weights.end(), 0.0);
            sol.weights[i] = 1.0;
            sol.value = objective[i];
            return sol;
        }
    }
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            double denom = equality[i] - equality[j];
            if (std::abs(denom) <= 1e-14) continue;
            double wi = (target - equality[j]) / denom;
            if (wi <= kMatchTol || wi >= 1.0 - kMatchTol) continue;
            double value = wi * objective[i] + (1.0 - wi) * objective[j];
            if (std::abs(value - z) <= kMatchTol) {
                std::fill(sol.weights.begin(), sol.weights.end(), 0.0);
                sol.weights[i] = wi;
                sol.weights[j] = 1.0 - wi;
                sol.value = value;
                return sol;
            }
        }
    }
    return sol;
}

std::vector<double> make_grid(std::span<const double> values, size_t grid_size) {
    std::vector<double> grid(values.begin(), values.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.size() >= 2 && grid_size > grid.size()) {
        size_t extra = grid_size - grid.size();
        double lo = grid.front(), hi = grid.back();
        for (size_t k = 1; k <= extra; ++k) {
            grid.push_back(lo + (hi - lo) * static_cast<double>(k) /
                                    static_cast<double>(extra + 1));
        }
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    }
    return grid;
}

namespace {

CurveVertex make_vertex(std::span<const AssetPoint> assets, std::vector<double> weights) {
    CurveVertex vx;
    vx.weights = std::move(weights);
    for (size_t i = 0; i < assets.size(); ++i) {
        vx.v += vx.weights[i] * assets[i].v;
        vx.R += vx.weights[i] * assets[i].R;
    }
    return vx;
}

void merge_close_vertices(std::vector<CurveVertex>& vs) {
    std::vector<CurveVertex> out;
    for (auto& vx : vs) {
        if (!out.empty() && std::abs(out.back().v - vx.v) < 1e-9 &&
            std::abs(out.back().R - vx.R) < 1e-9) {
            continue;
        }
        out.push_back(std::move(vx));
    }
    vs = std::move(out);
}

// Splits at the peak return: left = ascending portion through the last
// peak vertex, right = from the first peak vertex onward.
void split_sides(FrontierCurve& curve) {
    if (curve.vertices.empty()) return;
    double rmax = -std::numeric_limits<double>::infinity();
    for (const auto& vx : curve.vertices) rmax = std::max(rmax, vx.R);
    size_t first_peak = curve.vertices.size(), last_peak = 0;
    for (size_t i = 0; i < curve.vertices.size(); ++i) {
        if (curve.vertices[i].R >= rmax - 1e-12) {
            if (first_peak == curve.vertices.size()) first_peak = i;
            last_peak = i;
        }
    }
    curve.left.assign(curve.vertices.begin(), curve.vertices.begin() + last_peak + 1);
    curve.right.assign(curve.vertices.begin() + first_peak, curve.vertices.end());
}

std::vector<std::string> symbols_of(std::span<const AssetPoint> assets) {
    std::vector<std::string> s;
    s.reserve(assets.size());
    for (const auto& a : assets) s.push_back(a.symbol);
    return s;
}

}  // namespace

FrontierCurve min_pindex_curve(std::span<const AssetPoint> assets,
                               std::span<const double> return_grid) {
    if (assets.empty()) throw DomainError("min_pindex_curve: empty cross-section");
    std::vector<double> vcoef, rcoef;
    for (const auto& a : assets) {
        vcoef.push_back(a.v);
        rcoef.push_back(a.R);
    }
    FrontierCurve curve;
    curve.symbols = symbols_of(assets);
    for (double t : return_grid) {
        LpSolution sol = solve_lp(vcoef, LpDirection::Minimize, rcoef, t);
        if (!sol.feasible) continue;
        curve.vertices.push_back(make_vertex(assets, std::move(sol.weights)));
    }
    if (curve.vertices.empty())
        throw DomainError("min_pindex_curve: no feasible grid point");
    std::stable_sort(curve.vertices.begin(), curve.vertices.end(),
                     [](const CurveVertex& a, const CurveVertex& b) { return a.v < b.v; });
    merge_close_vertices(curve.vertices);
    split_sides(curve);
    return curve;
}

FrontierCurve max_return_curve(std::span<const AssetPoint> assets,
                               std::span<const double> pindex_grid) {
    if (assets.empty()) throw DomainError("max_return_curve: empty cross-section");
    std::vector<double> vcoef, rcoef;
    for (const auto& a : assets) {
        vcoef.push_back(a.v);
        rcoef.push_back(a.R);
    }
    FrontierCurve curve;
    curve.symbols = symbols_of(assets);
    for (double t : pindex_grid) {
        LpSolution sol = solve_lp(rcoef, LpDirection::Maximize, vcoef, t);
        if (!sol.feasible) continue;
        curve.vertices.push_back(make_vertex(assets, std::move(sol.weights)));
    }
    if (curve.vertices.empty())
        throw DomainError("max_return_curve: no feasible grid point");
    std::stable_sort(curve.vertices.begin(), curve.vertices.end(),
                     [](const CurveVertex& a, const CurveVertex& b) { return a.v < b.v; });
    merge_close_vertices(curve.vertices);
    split_sides(curve);
    return curve;
}

FrontierCurve build_eef(std::span<const AssetPoint> assets, size_t grid_size) {
    if (assets.empty()) throw DomainError("build_eef: empty cross-section");
    std::vector<double> vcoef, rcoef;
    for (const auto& a : assets) {
        vcoef.push_back(a.v);
        rcoef.push_back(a.R);
    }
    FrontierCurve curve = max_return_curve(assets, make_grid(vcoef, grid_size));

    // EEF = ascending portion of the max-return curve whose vertices are
    // also v-minimal for their return (i.e. lie on the min-p-index curve).
    std::vector<CurveVertex> eef;
    for (const auto& vx : curve.left) {
        LpSolution sol = solve_lp(vcoef, LpDirection::Minimize, rcoef, vx.R);
        if (sol.feasible && std::abs(sol.value - vx.v) <= 1e-9) eef.push_back(vx);
    }
    curve.left = std::move(eef);
    return curve;
}

std::vector<std::string> eef_stock_members(const FrontierCurve& curve, FrontierSide side) {
    const auto& vs = side == FrontierSide::Left ? curve.left : curve.right;
    std::vector<std::string> out;
    for (const auto& vx : vs) {
        for (size_t i = 0; i < vx.weights.size(); ++i) {
            if (vx.weights[i] > 1e-9) out.push_back(curve.symbols[i]);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string tangent_stock(std::span<const AssetPoint> assets, double r) {
    if (assets.empty()) throw DomainError("tangent_stock: empty cross-section");
    std::vector<size_t> order(assets.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return assets[a].symbol < assets[b].symbol;
    });
    const AssetPoint* best = nullptr;
    double best_ratio = 0.0;
    for (size_t idx : order) {
        const AssetPoint& a = assets[idx];
        if (a.v <= 0.0) throw DomainError("tangent_stock requires positive p-indexes");
        double ratio = (a.R - r) / a.v;
        if (!best || ratio > best_ratio) {
            best = &a;
            best_ratio = ratio;
        }
    }
    return best->symbol;
}

}  // namespace pfrontier
