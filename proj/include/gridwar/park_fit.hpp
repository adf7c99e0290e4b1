#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gridwar/park_design.hpp"

namespace gridwar {

enum class ParkEstimator { naive_ols, ols, three_part_ols, ridge, espn_additive, fangraphs_additive };

inline std::string to_string(ParkEstimator e) {
    switch (e) {
        case ParkEstimator::naive_ols: return "naive_ols";
        case ParkEstimator::ols: return "ols";
        case ParkEstimator::three_part_ols: return "three_part_ols";
        case ParkEstimator::ridge: return "ridge";
        case ParkEstimator::espn_additive: return "espn_additive";
        case ParkEstimator::fangraphs_additive: return "fangraphs_additive";
    }
    return "?";
}

inline ParkEstimator park_estimator_from_string(const std::string& s) {
    if (s == "naive" || s == "naive_ols") return ParkEstimator::naive_ols;
    if (s == "ols") return ParkEstimator::ols;
    if (s == "three-part" || s == "three_part_ols") return ParkEstimator::three_part_ols;
    if (s == "ridge") return ParkEstimator::ridge;
    if (s == "espn" || s == "espn_additive") return ParkEstimator::espn_additive;
    if (s == "fangraphs" || s == "fangraphs_additive") return ParkEstimator::fangraphs_additive;
    throw ValidationError("unknown park estimator '" + s + "'");
}

// Centered per-park additive run effects.
struct ParkEffectSet {
    std::map<std::string, double> alpha;  // park code -> runs per half-inning above average
    ParkEstimator estimator = ParkEstimator::ols;
    double lambda = 0.0;
    YearWindow window;
    bool centered = true;
};

namespace park_detail {

inline Eigen::VectorXd design_y(const ParkDesign& d) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(d.rows.size()));
    for (std::size_t i = 0; i < d.rows.size(); ++i) y[static_cast<Eigen::Index>(i)] = d.rows[i].y;
    return y;
}

// Dense X'X for the full [1|P|O|D] design, accumulated row-by-row (each row
// touches at most four columns).
inline Eigen::MatrixXd xtx_full(const ParkDesign& d) {
    const Eigen::Index p = d.n_cols();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
    Eigen::Index cols[4];
    for (const auto& row : d.rows) {
        int k = 0;
        cols[k++] = 0;
        if (row.park >= 0) cols[k++] = d.park_col(row.park);
        if (row.offense >= 0) cols[k++] = d.off_col(row.offense);
        if (row.defense >= 0) cols[k++] = d.def_col(row.defense);
        for (int a = 0; a < k; ++a)
            for (int b = a; b < k; ++b) m(cols[a], cols[b]) += 1.0;
    }
    return m.selfadjointView<Eigen::Upper>();
}

inline Eigen::VectorXd xty_full(const ParkDesign& d, const Eigen::VectorXd& y) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d.n_cols());
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        const auto& row = d.rows[i];
        double yi = y[static_cast<Eigen::Index>(i)];
        v[0] += yi;
        if (row.park >= 0) v[d.park_col(row.park)] += yi;
        if (row.offense >= 0) v[d.off_col(row.offense)] += yi;
        if (row.defense >= 0) v[d.def_col(row.defense)] += yi;
    }
    return v;
}

// X'X and X'y for the intercept+park-only model.
inline Eigen::MatrixXd xtx_naive(const ParkDesign& d) {
    const Eigen::Index p = 1 + static_cast<Eigen::Index>(d.parks.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
    for (const auto& row : d.rows) {
        m(0, 0) += 1.0;
        if (row.park >= 0) {
            Eigen::Index c = 1 + row.park;
            m(0, c) += 1.0;
            m(c, c) += 1.0;
        }
    }
    return m.selfadjointView<Eigen::Upper>();
}

inline Eigen::VectorXd xty_naive(const ParkDesign& d, const Eigen::VectorXd& y) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(1 + static_cast<Eigen::Index>(d.parks.size()));
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        const auto& row = d.rows[i];
        double yi = y[static_cast<Eigen::Index>(i)];
        v[0] += yi;
        if (row.park >= 0) v[1 + row.park] += yi;
    }
    return v;
}

// Solves the normal equations with an explicit rank check; a deficient
// system reports which columns are linearly dependent.
inline Eigen::VectorXd solve_checked(const Eigen::MatrixXd& xtx, const Eigen::VectorXd& xty,
                                     const std::function<std::string(Eigen::Index)>& name) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
    lu.setThreshold(1e-8);
    if (lu.rank() < xtx.rows()) {
        Eigen::MatrixXd kernel = lu.kernel();
        std::string cols;
        for (Eigen::Index j = 0; j < xtx.rows(); ++j) {
            if (kernel.row(j).cwiseAbs().maxCoeff() > 1e-6) {
                if (!cols.empty()) cols += ", ";
                cols += name(j);
            }
        }
        throw ValidationError("rank-deficient design; dependent columns: " + cols);
    }
    return lu.solve(xty);
}

// Extracts the centered park-effect vector from a coefficient vector whose
// park block starts at column 1 (reference park pinned at zero).
inline ParkEffectSet extract_centered(const ParkDesign& d, const Eigen::VectorXd& beta,
                                      ParkEstimator estimator, double lambda,
                                      YearWindow window) {
    ParkEffectSet set;
    set.estimator = estimator;
    set.lambda = lambda;
    set.window = window;
    set.centered = true;

    const std::size_t n_parks = d.parks.size() + 1;
    double mean = 0.0;
    for (std::size_t j = 0; j < d.parks.size(); ++j) mean += beta[1 + static_cast<Eigen::Index>(j)];
    mean /= static_cast<double>(n_parks);

    set.alpha[d.reference_park] = -mean;
    for (std::size_t j = 0; j < d.parks.size(); ++j)
        set.alpha[d.parks[j]] = beta[1 + static_cast<Eigen::Index>(j)] - mean;
    return set;
}

}  // namespace park_detail

// Method 1: least squares on intercept + park block only, ignoring team
// quality entirely.
inline ParkEffectSet fit_park_naive_ols(const ParkDesign& d, const Eigen::VectorXd* y_override = nullptr,
                                        YearWindow window = {}) {
    Eigen::VectorXd y = y_override ? *y_override : park_detail::design_y(d);
    Eigen::MatrixXd xtx = park_detail::xtx_naive(d);
    Eigen::VectorXd xty = park_detail::xty_naive(d, y);
    auto name = [&](Eigen::Index c) {
        return c == 0 ? std::string("intercept") : "park=" + d.parks[c - 1];
    };
    Eigen::VectorXd beta = park_detail::solve_checked(xtx, xty, name);
    return park_detail::extract_centered(d, beta, ParkEstimator::naive_ols, 0.0, window);
}

// Method 2: least squares on the full [1|P|O|D] design.
inline ParkEffectSet fit_park_ols(const ParkDesign& d, const Eigen::VectorXd* y_override = nullptr,
                                  YearWindow window = {}) {
    Eigen::VectorXd y = y_override ? *y_override : park_detail::design_y(d);
    Eigen::MatrixXd xtx = park_detail::xtx_full(d);
    Eigen::VectorXd xty = park_detail::xty_full(d, y);
    Eigen::VectorXd beta = park_detail::solve_checked(
        xtx, xty, [&](Eigen::Index c) { return d.column_name(c); });
    return park_detail::extract_centered(d, beta, ParkEstimator::ols, 0.0, window);
}

// Method 4: ridge on the full design, intercept unpenalized, indicator
// columns unstandardized. lambda = 0 reduces exactly to OLS.
inline ParkEffectSet fit_park_ridge(const ParkDesign& d, double lambda,
                                    const Eigen::VectorXd* y_override = nullptr,
                                    YearWindow window = {}) {
    if (lambda < 0) throw ValidationError("ridge: lambda must be nonnegative");
    Eigen::VectorXd y = y_override ? *y_override : park_detail::design_y(d);
    Eigen::MatrixXd xtx = park_detail::xtx_full(d);
    for (Eigen::Index j = 1; j < xtx.rows(); ++j) xtx(j, j) += lambda;
    Eigen::VectorXd xty = park_detail::xty_full(d, y);
    Eigen::VectorXd beta = park_detail::solve_checked(
        xtx, xty, [&](Eigen::Index c) { return d.column_name(c); });
    return park_detail::extract_centered(d, beta, ParkEstimator::ridge, lambda, window);
}

// Method 3, three-part OLS.
//   1. offense quality from road-batting half-innings: y ~ 1 + P + O
//      (the park column doubles as the defense proxy there);
//   2. defense quality from home-batting half-innings: y ~ 1 + P + D;
//   3. parks from all rows with the plugged-in quality scores entering
//      through two scalar weights: y ~ 1 + P + b1*q_off + b2*q_def.
inline ParkEffectSet fit_park_three_part_ols(const ParkDesign& d,
                                             const Eigen::VectorXd* y_override = nullptr,
                                             YearWindow window = {}) {
    Eigen::VectorXd y = y_override ? *y_override : park_detail::design_y(d);
    const std::size_t n_parks = d.parks.size();
    const std::size_t n_ts = d.team_seasons.size();

    bool any_road = false, any_home = false;
    for (const auto& row : d.rows) (row.home_batting ? any_home : any_road) = true;
    if (!any_road || !any_home)
        throw ValidationError("three-part OLS: need both road-batting and home-batting half-innings");

    // Steps 1 and 2 share their structure; build each subset's [1|P|T] system.
    auto fit_subset = [&](bool home_batting, bool use_defense) {
        const Eigen::Index p = 1 + static_cast<Eigen::Index>(n_parks + n_ts);
        Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(p, p);
        Eigen::VectorXd xty = Eigen::VectorXd::Zero(p);
        Eigen::Index cols[3];
        for (std::size_t i = 0; i < d.rows.size(); ++i) {
            const auto& row = d.rows[i];
            if (row.home_batting != home_batting) continue;
            int team = use_defense ? row.defense : row.offense;
            int k = 0;
            cols[k++] = 0;
            if (row.park >= 0) cols[k++] = 1 + row.park;
            if (team >= 0) cols[k++] = 1 + static_cast<Eigen::Index>(n_parks) + team;
            double yi = y[static_cast<Eigen::Index>(i)];
            for (int a = 0; a < k; ++a) {
                xty[cols[a]] += yi;
                for (int b = a; b < k; ++b) xtx(cols[a], cols[b]) += 1.0;
            }
        }
        Eigen::MatrixXd sym = xtx.selfadjointView<Eigen::Upper>();
        auto name = [&](Eigen::Index c) -> std::string {
            if (c == 0) return "intercept";
            if (c <= static_cast<Eigen::Index>(n_parks)) return "park=" + d.parks[c - 1];
            return (use_defense ? "def=" : "off=") +
                   d.team_seasons[c - 1 - static_cast<Eigen::Index>(n_parks)];
        };
        return park_detail::solve_checked(sym, xty, name);
    };

    Eigen::VectorXd off_fit = fit_subset(/*home_batting=*/false, /*use_defense=*/false);
    Eigen::VectorXd def_fit = fit_subset(/*home_batting=*/true, /*use_defense=*/true);

    // Step 3: y ~ 1 + P + b1*q_off + b2*q_def over all rows.
    const Eigen::Index qo = 1 + static_cast<Eigen::Index>(n_parks);
    const Eigen::Index qd = qo + 1;
    const Eigen::Index p3 = qd + 1;
    Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(p3, p3);
    Eigen::VectorXd xty = Eigen::VectorXd::Zero(p3);
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        const auto& row = d.rows[i];
        double q_off = row.offense >= 0 ? off_fit[1 + static_cast<Eigen::Index>(n_parks) + row.offense] : 0.0;
        double q_def = row.defense >= 0 ? def_fit[1 + static_cast<Eigen::Index>(n_parks) + row.defense] : 0.0;
        double yi = y[static_cast<Eigen::Index>(i)];

        Eigen::Index cols[4];
        double vals[4];
        int k = 0;
        cols[k] = 0; vals[k++] = 1.0;
        if (row.park >= 0) { cols[k] = 1 + row.park; vals[k++] = 1.0; }
        if (q_off != 0.0) { cols[k] = qo; vals[k++] = q_off; }
        if (q_def != 0.0) { cols[k] = qd; vals[k++] = q_def; }
        for (int a = 0; a < k; ++a) {
            xty[cols[a]] += vals[a] * yi;
            for (int b = a; b < k; ++b) xtx(cols[a], cols[b]) += vals[a] * vals[b];
        }
    }
    // A quality-score column that is (numerically) zero — e.g. a league whose
    // estimated team effects all vanish — carries no information; pin its
    // weight to zero instead of failing the rank check.
    for (Eigen::Index c : {qo, qd}) {
        if (xtx(c, c) < 1e-10) {
            xtx.row(c).setZero();
            xtx.col(c).setZero();
            xtx(c, c) = 1.0;
            xty[c] = 0.0;
        }
    }
    Eigen::MatrixXd sym = xtx.selfadjointView<Eigen::Upper>();
    auto name3 = [&](Eigen::Index c) -> std::string {
        if (c == 0) return "intercept";
        if (c <= static_cast<Eigen::Index>(n_parks)) return "park=" + d.parks[c - 1];
        return c == qo ? "offense_score" : "defense_score";
    };
    Eigen::VectorXd beta = park_detail::solve_checked(sym, xty, name3);
    return park_detail::extract_centered(d, beta, ParkEstimator::three_part_ols, 0.0, window);
}

}  // namespace gridwar
