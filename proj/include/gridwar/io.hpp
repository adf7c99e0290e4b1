#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gridwar/csv.hpp"
#include "gridwar/gwar.hpp"
#include "gridwar/park_fit.hpp"
#include "gridwar/run_dist.hpp"
#include "gridwar/types.hpp"
#include "gridwar/win_grid.hpp"

namespace gridwar::io {

using nlohmann::json;

// ---- plate_appearances.csv --------------------------------------------

inline const std::vector<std::string>& plate_appearance_header() {
    static const std::vector<std::string> h = {
        "game_id",    "year",        "date",        "home_team",
        "away_team",  "league",      "park",        "inning",
        "half",       "pitcher_id",  "batter_id",   "is_starter",
        "outs_before", "base_state_before", "runs_on_play", "outs_recorded"};
    return h;
}

inline void write_plate_appearances(std::ostream& out, const std::vector<PlateAppearance>& pas) {
    bool earned = std::any_of(pas.begin(), pas.end(),
                              [](const PlateAppearance& pa) { return pa.earned_runs_on_play.has_value(); });
    std::vector<std::string> header = plate_appearance_header();
    if (earned) header.push_back("earned_runs_on_play");
    csv::write_row(out, header);
    for (const auto& pa : pas) {
        std::vector<std::string> row = {
            pa.game_id, std::to_string(pa.year), pa.date, pa.home_team,
            pa.away_team, to_string(pa.league), pa.park,
            std::to_string(pa.inning), to_string(pa.half), pa.pitcher_id,
            pa.batter_id, pa.is_starter ? "1" : "0",
            std::to_string(pa.outs_before), std::string(pa.base_state_before.code()),
            std::to_string(pa.runs_on_play), std::to_string(pa.outs_recorded)};
        if (earned)
            row.push_back(pa.earned_runs_on_play ? std::to_string(*pa.earned_runs_on_play) : "");
        csv::write_row(out, row);
    }
}

// ---- half_innings.csv ---------------------------------------------------

inline void write_half_innings(std::ostream& out, const std::vector<HalfInningRecord>& his) {
    csv::write_row(out, {"game_id", "year", "park", "inning", "half", "offense_team_season",
                         "defense_team_season", "runs"});
    for (const auto& h : his)
        csv::write_row(out, {h.game_id, std::to_string(h.year), h.park, std::to_string(h.inning),
                             to_string(h.half), h.offense_team_season, h.defense_team_season,
                             std::to_string(h.runs)});
}

inline std::vector<HalfInningRecord> read_half_innings(const std::string& path) {
    csv::Table t = csv::read_table_file(path);
    int game = t.require_column("game_id"), year = t.require_column("year"),
        park = t.require_column("park"), inning = t.require_column("inning"),
        half = t.require_column("half"), off = t.require_column("offense_team_season"),
        def = t.require_column("defense_team_season"), runs = t.require_column("runs");
    std::vector<HalfInningRecord> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        HalfInningRecord h;
        h.game_id = row[game];
        h.year = csv::parse_int(row[year], "year");
        h.park = row[park];
        h.inning = csv::parse_int(row[inning], "inning");
        h.half = half_from_string(row[half]);
        h.offense_team_season = row[off];
        h.defense_team_season = row[def];
        h.runs = csv::parse_int(row[runs], "runs");
        out.push_back(std::move(h));
    }
    return out;
}

// ---- start_lines.csv ----------------------------------------------------

inline void write_start_lines(std::ostream& out, const std::vector<StartLine>& starts) {
    csv::write_row(out, {"pitcher_id", "game_id", "year", "date", "park", "is_home", "league",
                         "exit_kind", "innings", "exit_outs", "exit_base", "runs_allowed",
                         "team_won"});
    for (const auto& s : starts) {
        csv::write_row(out, {s.pitcher_id, s.game_id, std::to_string(s.year), s.date, s.park,
                             s.is_home ? "1" : "0", to_string(s.league), to_string(s.exit_kind),
                             std::to_string(s.innings),
                             s.exit_outs ? std::to_string(*s.exit_outs) : "",
                             s.exit_base ? std::string(s.exit_base->code()) : "",
                             std::to_string(s.runs_allowed), s.team_won ? "1" : "0"});
    }
}

inline std::vector<StartLine> read_start_lines(const std::string& path) {
    csv::Table t = csv::read_table_file(path);
    int pitcher = t.require_column("pitcher_id"), game = t.require_column("game_id"),
        year = t.require_column("year"), date = t.require_column("date"),
        park = t.require_column("park"), home = t.require_column("is_home"),
        league = t.require_column("league"), kind = t.require_column("exit_kind"),
        innings = t.require_column("innings"), outs = t.require_column("exit_outs"),
        base = t.require_column("exit_base"), runs = t.require_column("runs_allowed"),
        won = t.require_column("team_won");
    std::vector<StartLine> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        StartLine s;
        s.pitcher_id = row[pitcher];
        s.game_id = row[game];
        s.year = csv::parse_int(row[year], "year");
        s.date = row[date];
        s.park = row[park];
        s.is_home = csv::parse_bool(row[home], "is_home");
        s.league = league_from_string(row[league]);
        s.exit_kind = exit_kind_from_string(row[kind]);
        s.innings = csv::parse_int(row[innings], "innings");
        if (!row[outs].empty()) s.exit_outs = csv::parse_int(row[outs], "exit_outs");
        if (!row[base].empty()) s.exit_base = BaseState::from_code(row[base]);
        s.runs_allowed = csv::parse_int(row[runs], "runs_allowed");
        s.team_won = csv::parse_bool(row[won], "team_won");
        if (s.exit_kind == ExitKind::mid_inning && (!s.exit_outs || !s.exit_base))
            throw ValidationError("start line for '" + s.pitcher_id +
                                  "' is mid-inning but lacks exit state");
        out.push_back(std::move(s));
    }
    return out;
}

// ---- rejects.csv ----------------------------------------------------------

inline void write_rejects(std::ostream& out, const std::vector<RejectRow>& rejects) {
    csv::write_row(out, {"line", "reason", "raw"});
    for (const auto& r : rejects)
        csv::write_row(out, {std::to_string(r.line), r.reason, r.raw});
}

// Multi-source variant: `file` is empty for rejects raised after parsing
// (tied games, zero-out starts), where no single source line applies.
inline void write_rejects_with_source(
    std::ostream& out, const std::vector<std::pair<std::string, RejectRow>>& rejects) {
    csv::write_row(out, {"file", "line", "reason", "raw"});
    for (const auto& [file, r] : rejects)
        csv::write_row(out, {file, r.line ? std::to_string(r.line) : "", r.reason, r.raw});
}

// ---- f_grid.json ----------------------------------------------------------

inline json win_grid_to_json(const WinProbGrid& grid) {
    json coeffs;
    coeffs["intercept"] = grid.intercept;
    for (int i = 2; i <= WinProbGrid::kMaxInning; ++i)
        coeffs["inning=" + std::to_string(i)] = grid.inning_effect[i];
    for (int r = 1; r <= WinProbGrid::kRMax; ++r)
        coeffs["runs=" + std::to_string(r)] = grid.run_effect[r];
    coeffs["home"] = grid.home_effect;
    coeffs["league=NL"] = grid.nl_effect;
    for (const auto& [year, effect] : grid.year_effect)
        coeffs["year=" + std::to_string(year)] = effect;

    // Materialized value table for audit: every context, all 9x11 cells.
    json contexts = json::array();
    for (const auto& [year, _] : grid.year_effect) {
        for (League lg : {League::AL, League::NL}) {
            for (bool home : {false, true}) {
                FContext ctx{home, lg, year};
                json values = json::array();
                for (int I = 1; I <= WinProbGrid::kMaxInning; ++I) {
                    json row = json::array();
                    for (int R = 0; R <= WinProbGrid::kRMax; ++R) row.push_back(grid.eval(ctx, I, R));
                    values.push_back(std::move(row));
                }
                contexts.push_back({{"year", year},
                                    {"league", to_string(lg)},
                                    {"is_home", home},
                                    {"values", std::move(values)}});
            }
        }
    }

    return json{{"schema_version", kSchemaVersion},
                {"years", {grid.window.first, grid.window.last}},
                {"r_max", WinProbGrid::kRMax},
                {"coefficients", std::move(coeffs)},
                {"contexts", std::move(contexts)}};
}

inline WinProbGrid win_grid_from_json(const json& j) {
    WinProbGrid grid;
    grid.window = {j.at("years").at(0).get<int>(), j.at("years").at(1).get<int>()};
    const json& c = j.at("coefficients");
    grid.intercept = c.at("intercept").get<double>();
    for (int i = 2; i <= WinProbGrid::kMaxInning; ++i)
        grid.inning_effect[i] = c.at("inning=" + std::to_string(i)).get<double>();
    for (int r = 1; r <= WinProbGrid::kRMax; ++r)
        grid.run_effect[r] = c.at("runs=" + std::to_string(r)).get<double>();
    grid.home_effect = c.at("home").get<double>();
    grid.nl_effect = c.at("league=NL").get<double>();
    for (auto it = c.begin(); it != c.end(); ++it) {
        if (it.key().rfind("year=", 0) == 0)
            grid.year_effect[std::stoi(it.key().substr(5))] = it.value().get<double>();
    }
    return grid;
}

// ---- g_dist.json ------------------------------------------------------------

inline json run_dist_to_json(const InningRunDist& dist) {
    json cells = json::array();
    for (int s = 0; s < BaseState::kCount; ++s) {
        for (int o = 0; o < InningRunDist::kOuts; ++o) {
            BaseState st = BaseState::from_index(s);
            const auto& cell = dist.cell(st, o);
            json probs = json::array();
            for (double p : cell.probs) probs.push_back(p);
            cells.push_back({{"base", std::string(st.code())},
                             {"outs", o},
                             {"count", cell.count},
                             {"probs", std::move(probs)}});
        }
    }
    return json{{"schema_version", kSchemaVersion},
                {"years", {dist.window.first, dist.window.last}},
                {"r_max", InningRunDist::kRMax},
                {"cells", std::move(cells)}};
}

inline InningRunDist run_dist_from_json(const json& j) {
    InningRunDist dist;
    dist.window = {j.at("years").at(0).get<int>(), j.at("years").at(1).get<int>()};
    for (const auto& cell : j.at("cells")) {
        BaseState st = BaseState::from_code(cell.at("base").get<std::string>());
        int o = cell.at("outs").get<int>();
        auto& target = dist.cell(st, o);
        target.count = cell.at("count").get<long>();
        const auto& probs = cell.at("probs");
        for (int r = 0; r <= InningRunDist::kRMax; ++r)
            target.probs[r] = probs.at(r).get<double>();
    }
    return dist;
}

// ---- park_fx.json -------------------------------------------------------------

inline json park_effects_to_json(const ParkEffectSet& fx) {
    json alpha;
    for (const auto& [park, value] : fx.alpha) alpha[park] = value;
    return json{{"schema_version", kSchemaVersion},
                {"estimator", to_string(fx.estimator)},
                {"lambda", fx.lambda},
                {"years", {fx.window.first, fx.window.last}},
                {"centered", fx.centered},
                {"alpha", std::move(alpha)}};
}

inline ParkEffectSet park_effects_from_json(const json& j) {
    ParkEffectSet fx;
    fx.estimator = park_estimator_from_string(j.at("estimator").get<std::string>());
    fx.lambda = j.at("lambda").get<double>();
    fx.window = {j.at("years").at(0).get<int>(), j.at("years").at(1).get<int>()};
    fx.centered = j.at("centered").get<bool>();
    for (auto it = j.at("alpha").begin(); it != j.at("alpha").end(); ++it)
        fx.alpha[it.key()] = it.value().get<double>();
    return fx;
}

// ---- gwar_games.csv / gwar_seasons.csv -------------------------------------

inline void write_gwar_games(std::ostream& out, const std::vector<GwarGame>& games) {
    csv::write_row(out, {"pitcher_id", "game_id", "year", "park", "innings", "runs_allowed",
                         "exit_kind", "exit_outs", "exit_base", "alpha", "raw_gwar",
                         "park_adjusted_gwar"});
    for (const auto& g : games) {
        csv::write_row(out, {g.pitcher_id, g.game_id, std::to_string(g.year), g.park,
                             std::to_string(g.innings), std::to_string(g.runs_allowed),
                             to_string(g.exit_kind),
                             g.exit_outs ? std::to_string(*g.exit_outs) : "",
                             g.exit_base ? std::string(g.exit_base->code()) : "",
                             csv::format_double(g.alpha), csv::format_double(g.raw_gwar),
                             csv::format_double(g.park_adjusted_gwar)});
    }
}

inline void write_gwar_seasons(std::ostream& out, const std::vector<GwarSeason>& seasons) {
    csv::write_row(out, {"pitcher_id", "year", "games", "raw_gwar", "gwar", "rescaled_gwar"});
    for (const auto& s : seasons)
        csv::write_row(out, {s.pitcher_id, std::to_string(s.year), std::to_string(s.games),
                             csv::format_double(s.raw_gwar), csv::format_double(s.gwar),
                             s.rescaled_gwar ? csv::format_double(*s.rescaled_gwar) : ""});
}

struct SeasonRow {
    std::string pitcher_id;
    int year = 0;
    int games = 0;
    double raw_gwar = 0.0;
    double gwar = 0.0;
};

inline std::vector<SeasonRow> read_gwar_seasons(const std::string& path) {
    csv::Table t = csv::read_table_file(path);
    int pitcher = t.require_column("pitcher_id"), year = t.require_column("year"),
        games = t.require_column("games"), raw = t.require_column("raw_gwar"),
        gwar = t.require_column("gwar");
    std::vector<SeasonRow> out;
    for (const auto& row : t.rows)
        out.push_back({row[pitcher], csv::parse_int(row[year], "year"),
                       csv::parse_int(row[games], "games"), csv::parse_double(row[raw], "raw_gwar"),
                       csv::parse_double(row[gwar], "gwar")});
    return out;
}

// Runs-allowed histogram per pitcher, from the per-game table.
inline std::map<std::string, std::map<int, long>> read_run_histograms(const std::string& path,
                                                                      int year_filter = 0) {
    csv::Table t = csv::read_table_file(path);
    int pitcher = t.require_column("pitcher_id"), year = t.require_column("year"),
        runs = t.require_column("runs_allowed");
    std::map<std::string, std::map<int, long>> out;
    for (const auto& row : t.rows) {
        if (year_filter && csv::parse_int(row[year], "year") != year_filter) continue;
        out[row[pitcher]][csv::parse_int(row[runs], "runs_allowed")] += 1;
    }
    return out;
}

// Reference WAR table: pitcher, season, war.
inline std::map<std::string, double> read_reference_war(const std::string& path, int year_filter) {
    csv::Table t = csv::read_table_file(path);
    int pitcher = t.require_column("pitcher"), season = t.require_column("season"),
        war = t.require_column("war");
    std::map<std::string, double> out;
    for (const auto& row : t.rows) {
        if (year_filter && csv::parse_int(row[season], "season") != year_filter) continue;
        out[row[pitcher]] = csv::parse_double(row[war], "war");
    }
    return out;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

inline void write_json_atomic(const std::string& path, const json& j) {
    csv::atomic_write(path, [&](std::ostream& out) { out << j.dump(2) << "\n"; });
}

}  // namespace gridwar::io
