#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "gridwar/park_fit.hpp"
#include "gridwar/rng.hpp"

namespace gridwar {

enum class SimStudy { independent, divisional_outlier };

enum class SimNoise {
    // y = round(max(0, mu + |N(0,1)|)): additive half-normal. The mean shift
    // is constant across rows, so it is absorbed by the intercept and every
    // linear estimator sees an undistorted signal. Default.
    additive_half_normal,
    // y = round(N(mu,1) conditioned >= 0): truncation compresses small means
    // toward a common positive floor, which biases every park coefficient by
    // a shared amount. Kept for comparison.
    truncated_redraw,
};

inline std::string to_string(SimStudy s) {
    return s == SimStudy::independent ? "independent" : "divisional_outlier";
}

inline std::string to_string(SimNoise n) {
    return n == SimNoise::additive_half_normal ? "additive_half_normal" : "truncated_redraw";
}

struct SimulationSpec {
    SimStudy study = SimStudy::independent;
    int n_sims = 25;
    std::uint64_t seed = 0;
    SimNoise noise = SimNoise::additive_half_normal;
    // Ridge penalty used inside the study. The real-data default (0.25) is
    // invisible against a six-figure-row indicator design; the study needs a
    // penalty on the scale of the per-column observation counts to show the
    // variance/bias trade-off it exists to demonstrate.
    double ridge_lambda = 80.0;
    // Study-2 parameters; the defense divisional spread is zero as published,
    // overridable.
    double def_div_sd = 0.0;
    std::string outlier_park = "DEN";
    double outlier_effect = 0.32;
    // Team -> division (0..5) for the divisional study. Empty means the
    // synthetic T## team codes, whose division is index/5.
    std::map<std::string, int> divisions;
};

struct MethodErrors {
    std::string method;
    double l2 = 0.0;             // mean over draws of || centered fit - centered truth ||_2
    double per_park_rms = 0.0;   // mean over draws of l2 / sqrt(n_parks)
    double outlier_abs = 0.0;    // study 2: mean |fit - truth| at the outlier park
    double non_outlier_l2 = 0.0; // study 2: mean l2 over the other parks
    std::vector<double> per_draw_l2;
};

struct SimulationReport {
    SimulationSpec spec;
    int n_parks = 0;
    std::vector<MethodErrors> methods;
    int ridge_wins_vs_ols = 0;  // draws where ridge l2 <= ols l2
};

// Division membership of each team: contiguous blocks of five, six divisions,
// first three in one league.
inline int team_division(int team_idx) { return team_idx / 5; }

// Synthetic three-year schedule with the real league's shape: two leagues of
// three five-team divisions; home-and-home heavy inside the division, lighter
// across divisions, one rotating interleague block per year. Produces the
// half-inning skeleton (nine top + nine bottom per game) that the studies
// resample outcomes onto.
inline ParkDesign build_synthetic_design(int years_first = 2017, int years_last = 2019,
                                         int intra_division_home_games = 9,
                                         int intra_league_home_games = 3,
                                         int interleague_home_games = 1) {
    constexpr int kTeams = 30;
    // Park codes: P01..P29 plus two named ones. Team 0 plays at ANA so the
    // design's reference-park convention lands there, and team 19 plays at
    // DEN so the divisional-outlier study has a regular (non-reference)
    // column for its outlier.
    std::vector<std::string> team_codes, park_codes;
    for (int t = 0; t < kTeams; ++t) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "T%02d", t);
        team_codes.push_back(buf);
        std::snprintf(buf, sizeof(buf), "P%02d", t);
        park_codes.push_back(t == 0 ? "ANA" : t == 19 ? "DEN" : buf);
    }

    std::vector<HalfInningRecord> halves;
    long game_counter = 0;
    auto add_games = [&](int home, int away, int year, int count) {
        for (int g = 0; g < count; ++g) {
            std::string game_id = "S" + std::to_string(game_counter++);
            for (int inning = 1; inning <= 9; ++inning) {
                for (Half half : {Half::top, Half::bottom}) {
                    HalfInningRecord h;
                    h.game_id = game_id;
                    h.year = year;
                    h.park = park_codes[home];
                    h.inning = inning;
                    h.half = half;
                    const std::string& offense = half == Half::top ? team_codes[away] : team_codes[home];
                    const std::string& defense = half == Half::top ? team_codes[home] : team_codes[away];
                    h.offense_team_season = team_season_code(offense, year);
                    h.defense_team_season = team_season_code(defense, year);
                    h.runs = 0;  // filled per draw
                    halves.push_back(std::move(h));
                }
            }
        }
    };

    for (int year = years_first; year <= years_last; ++year) {
        int rotation = year - years_first;
        for (int home = 0; home < kTeams; ++home) {
            for (int away = 0; away < kTeams; ++away) {
                if (home == away) continue;
                int dh = team_division(home), da = team_division(away);
                bool same_league = (dh < 3) == (da < 3);
                int games;
                if (dh == da)
                    games = intra_division_home_games;
                else if (same_league)
                    games = intra_league_home_games;
                else
                    // One cross-league division pairing per year, rotating.
                    games = (da % 3) == ((dh + rotation) % 3) ? interleague_home_games : 0;
                if (games > 0) add_games(home, away, year, games);
            }
        }
    }
    return build_park_design(halves, {years_first, years_last});
}

namespace sim_detail {

struct TruthDraw {
    double beta0 = 0.0;
    std::vector<double> park;     // per park, design.all_parks() order
    std::vector<double> offense;  // per team-season (reference team-seasons included)
    std::vector<double> defense;
};

// Division of a team-season code's team. With no explicit map, synthetic
// T## codes place team index/5.
inline int division_of_ts(const std::string& ts, const SimulationSpec& spec) {
    std::string team = ts.substr(0, ts.size() - 4);
    if (!spec.divisions.empty()) {
        auto it = spec.divisions.find(team);
        if (it == spec.divisions.end())
            throw ValidationError("simulation: no division assigned to team '" + team + "'");
        if (it->second < 0 || it->second > 5)
            throw ValidationError("simulation: division of '" + team + "' outside 0..5");
        return it->second;
    }
    if (team.size() >= 2 && team[0] == 'T')
        return team_division(std::stoi(team.substr(1)));
    throw ValidationError("simulation: divisional study on non-synthetic team '" + team +
                          "' requires a division map");
}

// Draws one truth vector in the design's reference parameterization: the
// reference park and the per-year reference team-seasons are exactly zero,
// everything else is drawn. (A truth outside the estimable space would leak
// through the penalty into the park block and distort the comparison.)
// Team-season coefficient arrays are indexed reference slots first, then
// catalog order — see build_row_maps.
inline TruthDraw draw_truth(const ParkDesign& d, const SimulationSpec& spec, int draw_idx) {
    RngStream rng(spec.seed, "sim-beta", static_cast<std::uint64_t>(draw_idx));
    TruthDraw t;
    auto parks = d.all_parks();
    t.park.assign(parks.size(), 0.0);
    const std::size_t n_ref = d.reference_team_seasons.size();
    std::size_t n_ts = n_ref + d.team_seasons.size();
    t.offense.assign(n_ts, 0.0);
    t.defense.assign(n_ts, 0.0);

    if (spec.study == SimStudy::independent) {
        t.beta0 = 0.4;
        for (std::size_t j = 1; j < parks.size(); ++j) t.park[j] = rng.normal(0.04, 0.065);
        for (std::size_t k = n_ref; k < n_ts; ++k) t.offense[k] = rng.normal(0.02, 0.045);
        for (std::size_t k = n_ref; k < n_ts; ++k) t.defense[k] = rng.normal(0.03, 0.07);
    } else {
        t.beta0 = 0.15;
        if (parks.front() == spec.outlier_park)
            throw ValidationError("simulation: outlier park '" + spec.outlier_park +
                                  "' is the design's reference park");
        for (std::size_t j = 1; j < parks.size(); ++j)
            t.park[j] = parks[j] == spec.outlier_park ? spec.outlier_effect
                                                       : rng.normal(0.04, 0.065);
        // Divisional means first (shared by a division across the window),
        // then team-season draws around them.
        std::array<double, 6> div_off, div_def;
        for (auto& v : div_off) v = rng.normal(0.02, 0.05);
        for (auto& v : div_def) v = rng.normal(0.03, spec.def_div_sd);
        auto ts_at = [&](std::size_t idx) -> const std::string& {
            return idx < n_ref ? d.reference_team_seasons[idx]
                               : d.team_seasons[idx - n_ref];
        };
        for (std::size_t k = n_ref; k < n_ts; ++k) {
            int div = division_of_ts(ts_at(k), spec);
            t.offense[k] = rng.normal(div_off[div], 0.02);
            t.defense[k] = rng.normal(div_def[div], 0.033);
        }
    }
    return t;
}

// Per-row truth lookups resolved to design indices once.
struct RowMaps {
    std::vector<int> park_of_row;  // index into all_parks()
    std::vector<int> off_of_row;   // index into TruthDraw team-season arrays
    std::vector<int> def_of_row;
};

inline RowMaps build_row_maps(const ParkDesign& d) {
    RowMaps m;
    m.park_of_row.reserve(d.rows.size());
    m.off_of_row.reserve(d.rows.size());
    m.def_of_row.reserve(d.rows.size());

    // Reference team-seasons occupy slots [0, n_ref); catalog ones follow.
    // A row's offense/defense index of -1 means "one of the references" but
    // not which, so resolve references by year.
    std::map<int, int> ref_slot_by_year;
    for (std::size_t i = 0; i < d.reference_team_seasons.size(); ++i) {
        const std::string& ts = d.reference_team_seasons[i];
        ref_slot_by_year[std::stoi(ts.substr(ts.size() - 4))] = static_cast<int>(i);
    }
    const int n_ref = static_cast<int>(d.reference_team_seasons.size());
    for (const auto& row : d.rows) {
        m.park_of_row.push_back(row.park + 1);  // all_parks() puts reference first
        m.off_of_row.push_back(row.offense >= 0 ? n_ref + row.offense
                                                : ref_slot_by_year.at(row.year));
        m.def_of_row.push_back(row.defense >= 0 ? n_ref + row.defense
                                                : ref_slot_by_year.at(row.year));
    }
    return m;
}

inline Eigen::VectorXd draw_outcomes(const ParkDesign& d, const RowMaps& maps,
                                     const TruthDraw& t, const SimulationSpec& spec,
                                     int draw_idx) {
    RngStream rng(spec.seed, "sim-y", static_cast<std::uint64_t>(draw_idx));
    Eigen::VectorXd y(static_cast<Eigen::Index>(d.rows.size()));
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        double mu = t.beta0 + t.park[maps.park_of_row[i]] + t.offense[maps.off_of_row[i]] +
                    t.defense[maps.def_of_row[i]];
        double draw;
        if (spec.noise == SimNoise::additive_half_normal)
            draw = std::max(0.0, mu + std::abs(rng.normal()));
        else
            draw = rng.truncated_normal_nonneg(mu, 1.0);
        y[static_cast<Eigen::Index>(i)] = round_half_away(draw);
    }
    return y;
}

// Centered truth in all_parks() order.
inline std::vector<double> centered_truth(const std::vector<double>& park_truth) {
    double mean = 0.0;
    for (double v : park_truth) mean += v;
    mean /= static_cast<double>(park_truth.size());
    std::vector<double> out(park_truth.size());
    for (std::size_t j = 0; j < park_truth.size(); ++j) out[j] = park_truth[j] - mean;
    return out;
}

}  // namespace sim_detail

// Runs one simulation study: draws truth vectors and outcome vectors on the
// design's schedule, fits all four estimators per draw, and reports the
// park-effect recovery errors. Draws run in parallel; every draw's
// randomness comes from its own derived stream, so thread count and
// scheduling never change the report.
inline SimulationReport simulate_study(const SimulationSpec& spec, const ParkDesign& design) {
    if (spec.n_sims < 1) throw ValidationError("simulation: n_sims must be >= 1");
    auto parks = design.all_parks();
    const std::size_t n_parks = parks.size();
    int outlier_idx = -1;
    for (std::size_t j = 0; j < n_parks; ++j)
        if (parks[j] == spec.outlier_park) outlier_idx = static_cast<int>(j);
    if (spec.study == SimStudy::divisional_outlier && outlier_idx < 0)
        throw ValidationError("simulation: outlier park '" + spec.outlier_park +
                              "' not in design");

    sim_detail::RowMaps maps = sim_detail::build_row_maps(design);

    constexpr int kMethods = 4;
    const char* method_names[kMethods] = {"naive_ols", "ols", "three_part_ols", "ridge"};

    struct DrawResult {
        std::array<std::vector<double>, kMethods> fitted;  // centered, all_parks() order
        std::vector<double> truth;                         // centered
    };
    std::vector<DrawResult> results(static_cast<std::size_t>(spec.n_sims));

    auto alpha_vector = [&](const ParkEffectSet& set) {
        std::vector<double> v(n_parks);
        for (std::size_t j = 0; j < n_parks; ++j) v[j] = set.alpha.at(parks[j]);
        return v;
    };

    auto run_draw = [&](int m) {
        sim_detail::TruthDraw truth = sim_detail::draw_truth(design, spec, m);
        Eigen::VectorXd y = sim_detail::draw_outcomes(design, maps, truth, spec, m);
        DrawResult& r = results[static_cast<std::size_t>(m)];
        r.truth = sim_detail::centered_truth(truth.park);
        r.fitted[0] = alpha_vector(fit_park_naive_ols(design, &y));
        r.fitted[1] = alpha_vector(fit_park_ols(design, &y));
        r.fitted[2] = alpha_vector(fit_park_three_part_ols(design, &y));
        r.fitted[3] = alpha_vector(fit_park_ridge(design, spec.ridge_lambda, &y));
    };

    unsigned workers = std::min<unsigned>(thread_limit(), static_cast<unsigned>(spec.n_sims));
    if (workers <= 1) {
        for (int m = 0; m < spec.n_sims; ++m) run_draw(m);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (;;) {
                        int m = next.fetch_add(1);
                        if (m >= spec.n_sims) return;
                        run_draw(m);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    SimulationReport report;
    report.spec = spec;
    report.n_parks = static_cast<int>(n_parks);
    for (int k = 0; k < kMethods; ++k) {
        MethodErrors me;
        me.method = method_names[k];
        for (int m = 0; m < spec.n_sims; ++m) {
            const DrawResult& r = results[static_cast<std::size_t>(m)];
            double sq = 0.0, sq_non = 0.0;
            for (std::size_t j = 0; j < n_parks; ++j) {
                double e = r.fitted[k][j] - r.truth[j];
                sq += e * e;
                if (static_cast<int>(j) != outlier_idx) sq_non += e * e;
            }
            double l2 = std::sqrt(sq);
            me.per_draw_l2.push_back(l2);
            me.l2 += l2;
            me.per_park_rms += l2 / std::sqrt(static_cast<double>(n_parks));
            if (outlier_idx >= 0) {
                me.outlier_abs += std::abs(r.fitted[k][outlier_idx] - r.truth[outlier_idx]);
                me.non_outlier_l2 += std::sqrt(sq_non);
            }
        }
        double n = static_cast<double>(spec.n_sims);
        me.l2 /= n;
        me.per_park_rms /= n;
        me.outlier_abs /= n;
        me.non_outlier_l2 /= n;
        report.methods.push_back(std::move(me));
    }
    for (int m = 0; m < spec.n_sims; ++m)
        if (report.methods[3].per_draw_l2[m] <= report.methods[1].per_draw_l2[m])
            ++report.ridge_wins_vs_ols;
    return report;
}

}  // namespace gridwar
