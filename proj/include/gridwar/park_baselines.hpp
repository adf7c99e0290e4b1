#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gridwar/types.hpp"

namespace gridwar {

// Home/road run totals per team, the inputs of the ratio-style park factors.
struct TeamAggregate {
    std::string team;
    std::string home_park;
    long home_games = 0, road_games = 0;
    long home_scored = 0, home_allowed = 0;
    long road_scored = 0, road_allowed = 0;
};

// Rolls half-innings up to per-team home/road totals. The home park is
// whichever park hosts the team's home games (the modal park, should a team
// move mid-window).
inline std::map<std::string, TeamAggregate> aggregate_team_runs(
    const std::vector<HalfInningRecord>& half_innings, YearWindow window) {
    std::map<std::string, TeamAggregate> teams;
    std::map<std::string, std::map<std::string, long>> park_votes;
    // (team, game) pairs already counted toward the game tallies
    std::set<std::string> home_counted, road_counted;

    for (const auto& h : half_innings) {
        if (!window.contains(h.year)) continue;
        std::string offense = h.offense_team_season.substr(0, h.offense_team_season.size() - 4);
        std::string defense = h.defense_team_season.substr(0, h.defense_team_season.size() - 4);
        const std::string& home = h.half == Half::top ? defense : offense;
        const std::string& away = h.half == Half::top ? offense : defense;

        TeamAggregate& home_agg = teams[home];
        home_agg.team = home;
        TeamAggregate& away_agg = teams[away];
        away_agg.team = away;

        if (h.half == Half::bottom)
            home_agg.home_scored += h.runs, away_agg.road_allowed += h.runs;
        else
            home_agg.home_allowed += h.runs, away_agg.road_scored += h.runs;

        park_votes[home][h.park] += 1;
        if (home_counted.insert(home + "\x1f" + h.game_id).second) home_agg.home_games += 1;
        if (road_counted.insert(away + "\x1f" + h.game_id).second) away_agg.road_games += 1;
    }
    for (auto& [team, agg] : teams) {
        long best = -1;
        for (const auto& [park, votes] : park_votes[team])
            if (votes > best) best = votes, agg.home_park = park;
    }
    return teams;
}

// Ratio of runs created per home game to runs created per road game.
inline double espn_park_factor(const TeamAggregate& t) {
    if (t.home_games == 0 || t.road_games == 0)
        throw ValidationError("park factor: team '" + t.team + "' lacks home or road games");
    double home_rate = static_cast<double>(t.home_scored + t.home_allowed) /
                       static_cast<double>(t.home_games);
    double road_rate = static_cast<double>(t.road_scored + t.road_allowed) /
                       static_cast<double>(t.road_games);
    if (road_rate == 0.0) throw ValidationError("park factor: zero road scoring for '" + t.team + "'");
    return home_rate / road_rate;
}

// Regressed variant: shrink the raw ratio halfway to 1, then apply a weight
// set by the window length. Only the three-year weight (0.8) is published;
// other window lengths require an explicit weight.
inline double fangraphs_park_factor(const TeamAggregate& t, int years, int n_teams,
                                    std::optional<double> weight_override = std::nullopt) {
    if (t.home_games == 0 || t.road_games == 0)
        throw ValidationError("park factor: team '" + t.team + "' lacks home or road games");
    if (n_teams <= 0) throw ValidationError("park factor: need the league's team count");
    double w;
    if (weight_override) {
        w = *weight_override;
    } else if (years == 3) {
        w = 0.8;
    } else {
        throw ValidationError("fangraphs park factor: no published regression weight for a " +
                              std::to_string(years) + "-year window; pass one explicitly");
    }
    double hrpg = static_cast<double>(t.home_scored + t.home_allowed) /
                  static_cast<double>(t.home_games);
    double rrpg = static_cast<double>(t.road_scored + t.road_allowed) /
                  static_cast<double>(t.road_games);
    double xi = (hrpg - rrpg) / static_cast<double>(n_teams);
    double denom = rrpg + xi;
    if (denom == 0.0) throw ValidationError("park factor: degenerate road rate for '" + t.team + "'");
    double pf_raw = hrpg / denom;
    double ipf = (pf_raw + 1.0) / 2.0;
    return 1.0 - (1.0 - ipf) * w;
}

// Multiplicative factor -> runs per half-inning above average.
inline double to_additive(double multiplicative_alpha, double y_bar) {
    return (multiplicative_alpha - 1.0) * y_bar;
}

// Mean runs per half-inning over a window; the y_bar of the additive
// transform when derived from data.
inline double mean_half_inning_runs(const std::vector<HalfInningRecord>& half_innings,
                                    YearWindow window) {
    long total = 0, n = 0;
    for (const auto& h : half_innings) {
        if (!window.contains(h.year)) continue;
        total += h.runs;
        ++n;
    }
    if (n == 0) throw ValidationError("no half-innings in window");
    return static_cast<double>(total) / static_cast<double>(n);
}

}  // namespace gridwar
