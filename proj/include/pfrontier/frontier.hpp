#ifndef PFRONTIER_FRONTIER_HPP
#define PFRONTIER_FRONTIER_HPP

#include <span>
#include <string>
#include <vector>

#include "pfrontier/types.hpp"

namespace pfrontier {

/// One stock's (p-index, return) coordinates in a cross-section.
struct AssetPoint {
    std::string symbol;
    double v = 0.0;  // p-index
    double R = 0.0;  // period return
};

enum class LpDirection { Minimize, Maximize };

struct LpSolution {
    bool feasible = false;
    std::vector<double> weights;  // same length as the cross-section
    double value = 0.0;
};

/// Optimizes objective . w subject to equality . w = target, sum(w) = 1,
/// w >= 0. With these two equality constraints, an optimal basic feasible
/// solution has at most 2 nonzero weights; the returned solution is the
/// deterministic canonical one (fewest nonzero weights, then lexicographically
/// smallest support in input order).
LpSolution solve_lp(std::span<const double> objective, LpDirection direction,
                    std::span<const double> equality, double target);

struct CurveVertex {
    double v = 0.0;
    double R = 0.0;
    std::vector<double> weights;  // over the asset cross-section, >= 0, sum 1
};

enum class FrontierSide { Left, Right };

/// Piecewise-linear frontier. `vertices` are sorted; `left` holds the
/// non-negative-slope portion (for build_eef, the EEF itself) and `right`
/// the non-positive-slope remainder; the peak vertex appears on both sides.
struct FrontierCurve {
    std::vector<std::string> symbols;  // cross-section order used by weights
    std::vector<CurveVertex> vertices;
    std::vector<CurveVertex> left;
    std::vector<CurveVertex> right;
};

/// Minimum-p-index portfolio at each feasible return target.
FrontierCurve min_pindex_curve(std::span<const AssetPoint> assets,
                               std::span<const double> return_grid);

/// Maximum-return portfolio at each feasible p-index target.
FrontierCurve max_return_curve(std::span<const AssetPoint> assets,
                               std::span<const double> pindex_grid);

/// Default grid: the asset values themselves plus evenly spaced interior
/// points up to grid_size targets.
std::vector<double> make_grid(std::span<const double> values, size_t grid_size);

/// Intersects the minimum-p-index and maximum-return curves. `left` holds
/// the EEF (max-return vertices that are also v-minimal for their return);
/// `right` holds the non-positive-slope remainder of the max-return curve.
FrontierCurve build_eef(std::span<const AssetPoint> assets, size_t grid_size);

/// Symbols carrying strictly positive weight in any vertex of the side.
std::vector<std::string> eef_stock_members(const FrontierCurve& curve, FrontierSide side);

/// Cross-sectional argmax of (R - r) / v; ties break on symbol order.
std::string tangent_stock(std::span<const AssetPoint> assets, double r);

}  // namespace pfrontier

#endif
