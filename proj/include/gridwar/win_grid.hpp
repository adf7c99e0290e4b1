#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gridwar/logistic.hpp"
#include "gridwar/types.hpp"

namespace gridwar {

// Context a win-probability lookup is conditioned on.
struct FContext {
    bool is_home = false;
    League league = League::AL;
    int year = 0;
};

// Win-probability grid f(I, R): probability the starter's team wins after
// allowing R runs through I complete innings, per context. Fitted as a
// fixed-effects logistic regression; evaluation at R > r_max returns the
// R = r_max value.
class WinProbGrid {
public:
    static constexpr int kMaxInning = 9;
    static constexpr int kRMax = 10;

    // Fixed effects relative to: inning 1, zero runs, away, AL, earliest year.
    double intercept = 0.0;
    std::array<double, kMaxInning + 1> inning_effect{};  // index 1..9; [1] = 0 (reference)
    std::array<double, kRMax + 1> run_effect{};          // index 0..10; [0] = 0 (reference)
    double home_effect = 0.0;
    double nl_effect = 0.0;
    std::map<int, double> year_effect;  // per training year; earliest = 0 (reference)
    YearWindow window;

    bool in_window(int year) const { return year_effect.count(year) > 0; }

    double linear_predictor(const FContext& ctx, int I, int R) const {
        auto it = year_effect.find(ctx.year);
        if (it == year_effect.end())
            throw ValidationError("win grid: year " + std::to_string(ctx.year) +
                                  " outside training window");
        if (I < 1 || I > kMaxInning)
            throw ValidationError("win grid: inning " + std::to_string(I) + " outside 1..9");
        if (R < 0) throw ValidationError("win grid: negative runs");
        int r = std::min(R, kRMax);
        return intercept + inning_effect[I] + run_effect[r] + (ctx.is_home ? home_effect : 0.0) +
               (ctx.league == League::NL ? nl_effect : 0.0) + it->second;
    }

    double eval(const FContext& ctx, int I, int R) const {
        return sigmoid(linear_predictor(ctx, I, R));
    }
};

struct FDesign {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<std::string> column_names;
    std::vector<int> years;  // sorted distinct years present (earliest = reference)
};

// One row per retained start: end-of-inning exits only, without the
// ninth-inning home starts (if the home team leads after the top of the 9th
// the bottom half is never played, so those rows are win-biased).
inline FDesign build_f_design(const std::vector<StartLine>& starts) {
    std::vector<const StartLine*> rows;
    std::set<int> year_set;
    for (const auto& s : starts) {
        if (s.exit_kind != ExitKind::end_of_inning) continue;
        if (s.innings == 9 && s.is_home) continue;
        rows.push_back(&s);
        year_set.insert(s.year);
    }
    if (rows.empty()) throw ValidationError("f design: no usable starts");

    FDesign d;
    d.years.assign(year_set.begin(), year_set.end());

    d.column_names.push_back("intercept");
    for (int i = 2; i <= WinProbGrid::kMaxInning; ++i)
        d.column_names.push_back("inning=" + std::to_string(i));
    for (int r = 1; r <= WinProbGrid::kRMax; ++r)
        d.column_names.push_back("runs=" + std::to_string(r));
    d.column_names.push_back("home");
    d.column_names.push_back("league=NL");
    for (std::size_t k = 1; k < d.years.size(); ++k)
        d.column_names.push_back("year=" + std::to_string(d.years[k]));

    const Eigen::Index p = static_cast<Eigen::Index>(d.column_names.size());
    d.X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), p);
    d.y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows.size()));

    const Eigen::Index inning_base = 1;                            // inning=2 column
    const Eigen::Index run_base = inning_base + 8;                 // runs=1 column
    const Eigen::Index home_col = run_base + WinProbGrid::kRMax;   // after runs=1..10
    const Eigen::Index nl_col = home_col + 1;
    const Eigen::Index year_base = nl_col + 1;

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const StartLine& s = *rows[i];
        Eigen::Index row = static_cast<Eigen::Index>(i);
        d.X(row, 0) = 1.0;
        if (s.innings >= 2) d.X(row, inning_base + s.innings - 2) = 1.0;
        int r = std::min(s.runs_allowed, WinProbGrid::kRMax);
        if (r >= 1) d.X(row, run_base + r - 1) = 1.0;
        if (s.is_home) d.X(row, home_col) = 1.0;
        if (s.league == League::NL) d.X(row, nl_col) = 1.0;
        for (std::size_t k = 1; k < d.years.size(); ++k)
            if (s.year == d.years[k]) d.X(row, year_base + static_cast<Eigen::Index>(k) - 1) = 1.0;
        d.y(row) = s.team_won ? 1.0 : 0.0;
    }
    return d;
}

inline WinProbGrid fit_f(const std::vector<StartLine>& starts, const LogisticOptions& opts = {}) {
    FDesign d = build_f_design(starts);
    LogisticFit fit = fit_logistic(d.X, d.y, opts, &d.column_names);

    WinProbGrid grid;
    grid.window = {d.years.front(), d.years.back()};
    Eigen::Index c = 0;
    grid.intercept = fit.beta[c++];
    grid.inning_effect[1] = 0.0;
    for (int i = 2; i <= WinProbGrid::kMaxInning; ++i) grid.inning_effect[i] = fit.beta[c++];
    grid.run_effect[0] = 0.0;
    for (int r = 1; r <= WinProbGrid::kRMax; ++r) grid.run_effect[r] = fit.beta[c++];
    grid.home_effect = fit.beta[c++];
    grid.nl_effect = fit.beta[c++];
    grid.year_effect[d.years.front()] = 0.0;
    for (std::size_t k = 1; k < d.years.size(); ++k) grid.year_effect[d.years[k]] = fit.beta[c++];
    return grid;
}

// Piecewise-linear extension of R -> f(I,R) at a fractional argument,
// constant beyond the grid edge.
inline double eval_f_interpolated(const WinProbGrid& grid, const FContext& ctx, int I, double r) {
    if (r <= 0.0) return grid.eval(ctx, I, 0);
    if (r >= WinProbGrid::kRMax) return grid.eval(ctx, I, WinProbGrid::kRMax);
    int lo = static_cast<int>(std::floor(r));
    double frac = r - lo;
    if (frac == 0.0) return grid.eval(ctx, I, lo);
    return (1.0 - frac) * grid.eval(ctx, I, lo) + frac * grid.eval(ctx, I, lo + 1);
}

// Diagnostic for the convexity argument: average win probability of the
// actual run outcomes minus the win probability of the average outcome.
// Nonnegative whenever the grid row is discretely convex.
inline double jensen_gap(const WinProbGrid& grid, const FContext& ctx, int I,
                         const std::vector<int>& runs) {
    if (runs.empty()) throw ValidationError("jensen gap: empty run multiset");
    double mean_f = 0.0, mean_r = 0.0;
    for (int r : runs) {
        if (r < 0) throw ValidationError("jensen gap: negative runs");
        mean_f += grid.eval(ctx, I, r);
        mean_r += r;
    }
    mean_f /= static_cast<double>(runs.size());
    mean_r /= static_cast<double>(runs.size());
    return mean_f - eval_f_interpolated(grid, ctx, I, mean_r);
}

// Second-difference convexity check of row I, including the junction onto
// the flat extension beyond R=10; scopes the jensen_gap >= 0 guarantee.
inline bool row_is_discretely_convex(const WinProbGrid& grid, const FContext& ctx, int I) {
    for (int r = 1; r <= WinProbGrid::kRMax; ++r) {
        double second = grid.eval(ctx, I, r + 1) - 2.0 * grid.eval(ctx, I, r) +
                        grid.eval(ctx, I, r - 1);
        if (second < 0.0) return false;
    }
    return true;
}

}  // namespace gridwar
