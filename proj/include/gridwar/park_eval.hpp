#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gridwar/park_fit.hpp"

namespace gridwar {

struct OosEvaluation {
    double rmse = 0.0;
    double ecological_rmse = 0.0;
    // The no-park-information baseline (predicting the overall mean), for
    // context in reports.
    double mean_rmse = 0.0;
    double mean_ecological_rmse = 0.0;
};

// Out-of-sample test of a frozen park-effect set. The test window gets a
// fresh adjustment fit — y ~ b0 + b1 * alpha(park) + offense + defense — so
// every effect set (model-based or ratio-based) is compared after the same
// team-quality adjustment. The effect set itself stays fixed; only its scale
// and the team coefficients are refit.
inline OosEvaluation evaluate_out_of_sample(const ParkEffectSet& effects,
                                            const std::vector<HalfInningRecord>& test_half_innings,
                                            YearWindow test_window) {
    ParkDesign d = build_park_design(test_half_innings, test_window);

    std::set<std::string> missing;
    for (const auto& park : d.all_parks())
        if (!effects.alpha.count(park)) missing.insert(park);
    if (!missing.empty()) {
        std::string list;
        for (const auto& p : missing) {
            if (!list.empty()) list += ", ";
            list += p;
        }
        throw ValidationError("evaluation: parks in test data without effects: " + list);
    }

    auto parks = d.all_parks();
    std::vector<double> alpha_of_park(parks.size());
    for (std::size_t j = 0; j < parks.size(); ++j) alpha_of_park[j] = effects.alpha.at(parks[j]);

    // Columns: [intercept, alpha score, O block, D block].
    const Eigen::Index n_ts = static_cast<Eigen::Index>(d.team_seasons.size());
    const Eigen::Index p = 2 + 2 * n_ts;
    Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd xty = Eigen::VectorXd::Zero(p);

    Eigen::Index cols[4];
    double vals[4];
    for (const auto& row : d.rows) {
        double a = alpha_of_park[row.park + 1];
        int k = 0;
        cols[k] = 0; vals[k++] = 1.0;
        if (a != 0.0) { cols[k] = 1; vals[k++] = a; }
        if (row.offense >= 0) { cols[k] = 2 + row.offense; vals[k++] = 1.0; }
        if (row.defense >= 0) { cols[k] = 2 + n_ts + row.defense; vals[k++] = 1.0; }
        for (int i = 0; i < k; ++i) {
            xty[cols[i]] += vals[i] * row.y;
            for (int j = i; j < k; ++j) xtx(cols[i], cols[j]) += vals[i] * vals[j];
        }
    }
    // A (numerically) zero effect set leaves no park signal in the score
    // column; pin its weight to zero rather than fail the rank check. The
    // cutoff is an rms alpha of ~3e-5 runs per half-inning, orders below any
    // meaningful park effect.
    if (xtx(1, 1) < 1e-9 * static_cast<double>(d.rows.size())) {
        xtx.row(1).setZero();
        xtx.col(1).setZero();
        xtx(1, 1) = 1.0;
        xty[1] = 0.0;
    }
    Eigen::MatrixXd sym = xtx.selfadjointView<Eigen::Upper>();
    auto name = [&](Eigen::Index c) -> std::string {
        if (c == 0) return "intercept";
        if (c == 1) return "alpha_score";
        if (c < 2 + n_ts) return "off=" + d.team_seasons[c - 2];
        return "def=" + d.team_seasons[c - 2 - n_ts];
    };
    Eigen::VectorXd beta = park_detail::solve_checked(sym, xty, name);

    // Predictions and the two error scales.
    double sq_sum = 0.0, mean_sq_sum = 0.0;
    double y_total = 0.0;
    std::map<int, std::pair<double, double>> park_pred_obs;  // park idx -> (sum pred, sum obs)
    std::map<int, long> park_n;
    for (const auto& row : d.rows) y_total += row.y;
    double y_bar = y_total / static_cast<double>(d.rows.size());

    for (const auto& row : d.rows) {
        double a = alpha_of_park[row.park + 1];
        double pred = beta[0] + beta[1] * a;
        if (row.offense >= 0) pred += beta[2 + row.offense];
        if (row.defense >= 0) pred += beta[2 + n_ts + row.defense];
        double err = row.y - pred;
        sq_sum += err * err;
        double mean_err = row.y - y_bar;
        mean_sq_sum += mean_err * mean_err;
        auto& acc = park_pred_obs[row.park];
        acc.first += pred;
        acc.second += row.y;
        park_n[row.park] += 1;
    }
    const double n = static_cast<double>(d.rows.size());

    OosEvaluation out;
    out.rmse = std::sqrt(sq_sum / n);
    out.mean_rmse = std::sqrt(mean_sq_sum / n);

    double eco_sq = 0.0, eco_mean_sq = 0.0;
    for (const auto& [park, acc] : park_pred_obs) {
        double cnt = static_cast<double>(park_n[park]);
        double mean_pred = acc.first / cnt;
        double mean_obs = acc.second / cnt;
        eco_sq += (mean_pred - mean_obs) * (mean_pred - mean_obs);
        eco_mean_sq += (y_bar - mean_obs) * (y_bar - mean_obs);
    }
    double n_parks = static_cast<double>(park_pred_obs.size());
    out.ecological_rmse = std::sqrt(eco_sq / n_parks);
    out.mean_ecological_rmse = std::sqrt(eco_mean_sq / n_parks);
    return out;
}

struct LambdaSweepEntry {
    double lambda = 0.0;
    double rmse = 0.0;
    double ecological_rmse = 0.0;
};

struct LambdaSweepResult {
    double best_lambda = 0.0;
    std::vector<LambdaSweepEntry> entries;
};

// Fits ridge at each grid value on the training window and scores it on a
// held-out validation window by out-of-sample RMSE.
inline LambdaSweepResult tune_lambda(const std::vector<HalfInningRecord>& half_innings,
                                     YearWindow train_window, YearWindow val_window,
                                     const std::vector<double>& grid) {
    if (grid.empty()) throw ValidationError("tune-lambda: empty grid");
    ParkDesign train = build_park_design(half_innings, train_window);

    LambdaSweepResult result;
    double best = 0.0;
    bool first = true;
    for (double lambda : grid) {
        ParkEffectSet fx = fit_park_ridge(train, lambda, nullptr, train_window);
        OosEvaluation ev = evaluate_out_of_sample(fx, half_innings, val_window);
        result.entries.push_back({lambda, ev.rmse, ev.ecological_rmse});
        if (first || ev.rmse < best) {
            best = ev.rmse;
            result.best_lambda = lambda;
            first = false;
        }
    }
    return result;
}

}  // namespace gridwar
