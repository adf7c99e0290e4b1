#pragma once

#include <algorithm>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "gridwar/csv.hpp"
#include "gridwar/types.hpp"

namespace gridwar {

// Maps the canonical plate-appearance fields onto whatever the source export
// calls them. An absent entry means the source column shares the canonical
// name.
struct IngestSchema {
    std::map<std::string, std::string> columns;
    char delimiter = ',';

    std::string source_column(const std::string& canonical) const {
        auto it = columns.find(canonical);
        return it == columns.end() ? canonical : it->second;
    }
};

struct IngestResult {
    std::vector<PlateAppearance> plate_appearances;
    std::vector<RejectRow> rejects;
};

namespace detail {

inline const std::vector<std::string>& pa_fields() {
    static const std::vector<std::string> fields = {
        "game_id",    "year",        "date",        "home_team",
        "away_team",  "league",      "park",        "inning",
        "half",       "pitcher_id",  "batter_id",   "is_starter",
        "outs_before", "base_state_before", "runs_on_play", "outs_recorded"};
    return fields;
}

}  // namespace detail

// Every row either becomes a validated PlateAppearance or a line-numbered
// rejection; nothing is silently dropped. A missing column is a schema-level
// fatal error, not a per-row rejection.
inline IngestResult parse_plate_appearances(std::istream& in, const IngestSchema& schema) {
    csv::Table table = csv::read_table(in, schema.delimiter);

    std::map<std::string, int> col;
    for (const auto& field : detail::pa_fields())
        col[field] = table.require_column(schema.source_column(field));

    // Earned runs are optional: carried when the source maps the column.
    int earned_col = table.column(schema.source_column("earned_runs_on_play"));

    IngestResult result;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        std::size_t line = table.line_numbers[r];
        auto cell = [&](const std::string& field) -> const std::string& {
            int idx = col.at(field);
            if (static_cast<std::size_t>(idx) >= row.size())
                throw ValidationError("short row: no value for '" + field + "'");
            return row[idx];
        };
        try {
            PlateAppearance pa;
            pa.game_id = cell("game_id");
            pa.year = csv::parse_int(cell("year"), "year");
            pa.date = cell("date");
            pa.home_team = cell("home_team");
            pa.away_team = cell("away_team");
            pa.league = league_from_string(cell("league"));
            pa.park = cell("park");
            pa.inning = csv::parse_int(cell("inning"), "inning");
            pa.half = half_from_string(cell("half"));
            pa.pitcher_id = cell("pitcher_id");
            pa.batter_id = cell("batter_id");
            pa.is_starter = csv::parse_bool(cell("is_starter"), "is_starter");
            pa.outs_before = csv::parse_int(cell("outs_before"), "outs_before");
            if (!BaseState::is_valid_code(cell("base_state_before")))
                throw ValidationError("invalid base state '" + cell("base_state_before") + "'");
            pa.base_state_before = BaseState::from_code(cell("base_state_before"));
            pa.runs_on_play = csv::parse_int(cell("runs_on_play"), "runs_on_play");
            pa.outs_recorded = csv::parse_int(cell("outs_recorded"), "outs_recorded");

            if (pa.game_id.empty()) throw ValidationError("empty game_id");
            if (pa.inning < 1) throw ValidationError("inning < 1");
            if (pa.outs_before < 0 || pa.outs_before > 2)
                throw ValidationError("outs_before out of {0,1,2}");
            if (pa.outs_recorded < 0 || pa.outs_recorded > 3)
                throw ValidationError("outs_recorded out of {0..3}");
            if (pa.outs_before + pa.outs_recorded > 3)
                throw ValidationError("outs_before + outs_recorded > 3");
            if (pa.runs_on_play < 0 || pa.runs_on_play > 4)
                throw ValidationError("runs_on_play out of {0..4}");
            if (earned_col >= 0 && static_cast<std::size_t>(earned_col) < row.size() &&
                !row[earned_col].empty()) {
                int earned = csv::parse_int(row[earned_col], "earned_runs_on_play");
                if (earned < 0 || earned > pa.runs_on_play)
                    throw ValidationError("earned_runs_on_play outside [0, runs_on_play]");
                pa.earned_runs_on_play = earned;
            }

            result.plate_appearances.push_back(std::move(pa));
        } catch (const ValidationError& e) {
            std::string raw;
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) raw += schema.delimiter;
                raw += row[i];
            }
            result.rejects.push_back({line, e.what(), raw});
        }
    }
    return result;
}

namespace detail {

// Stable grouping key; top sorts before bottom within an inning.
inline bool group_less(const PlateAppearance& a, const PlateAppearance& b) {
    if (a.game_id != b.game_id) return a.game_id < b.game_id;
    if (a.inning != b.inning) return a.inning < b.inning;
    return static_cast<int>(a.half) < static_cast<int>(b.half);
}

inline bool same_group(const PlateAppearance& a, const PlateAppearance& b) {
    return a.game_id == b.game_id && a.inning == b.inning && a.half == b.half;
}

}  // namespace detail

// One record per (game, inning, half). Groups whose outs exceed three are
// kept (real exports contain scoring quirks) but flagged on the diagnostic
// stream.
inline std::vector<HalfInningRecord> build_half_innings(std::vector<PlateAppearance> pas,
                                                        std::ostream* diagnostics = nullptr) {
    std::stable_sort(pas.begin(), pas.end(), detail::group_less);

    std::vector<HalfInningRecord> out;
    for (std::size_t i = 0; i < pas.size();) {
        std::size_t j = i;
        int runs = 0;
        int outs = 0;
        while (j < pas.size() && detail::same_group(pas[i], pas[j])) {
            runs += pas[j].runs_on_play;
            outs += pas[j].outs_recorded;
            ++j;
        }
        const PlateAppearance& head = pas[i];
        HalfInningRecord rec;
        rec.game_id = head.game_id;
        rec.year = head.year;
        rec.park = head.park;
        rec.inning = head.inning;
        rec.half = head.half;
        const std::string& offense = head.half == Half::top ? head.away_team : head.home_team;
        const std::string& defense = head.half == Half::top ? head.home_team : head.away_team;
        rec.offense_team_season = team_season_code(offense, head.year);
        rec.defense_team_season = team_season_code(defense, head.year);
        rec.runs = runs;
        if (outs > 3 && diagnostics)
            *diagnostics << "warning: " << rec.game_id << " inning " << rec.inning << " "
                         << to_string(rec.half) << " records " << outs << " outs\n";
        out.push_back(std::move(rec));
        i = j;
    }
    return out;
}

// Derives one StartLine per starting pitcher per game.
//
// Exit semantics: if the starter's last plate appearance brings its inning to
// three outs, the start is an end-of-inning exit at that inning. Otherwise
// the exit is mid-inning and (O, S) are read from the next plate appearance
// of the same half-inning (the reliever's first batter). A final half-inning
// that ends early with no successor (walk-off) counts as end-of-inning: there
// is nothing left to complete.
//
// R counts only runs scored on the starter's own plate appearances; expected
// completion of a mid-inning exit is priced downstream by the run
// distribution, not charged here.
struct StartLineOptions {
    // Charge earned runs instead of total runs to R. Requires every starter
    // plate appearance to carry earned_runs_on_play.
    bool use_earned_runs = false;
};

inline std::vector<StartLine> build_start_lines(std::vector<PlateAppearance> pas,
                                                std::vector<RejectRow>* rejects = nullptr,
                                                std::ostream* diagnostics = nullptr,
                                                const StartLineOptions& opts = {}) {
    std::stable_sort(pas.begin(), pas.end(), detail::group_less);

    std::vector<StartLine> out;
    std::size_t game_begin = 0;
    while (game_begin < pas.size()) {
        std::size_t game_end = game_begin;
        while (game_end < pas.size() && pas[game_end].game_id == pas[game_begin].game_id)
            ++game_end;

        // Final score decides team_won; a tied trace is unusable.
        int away_runs = 0, home_runs = 0;
        for (std::size_t i = game_begin; i < game_end; ++i)
            (pas[i].half == Half::top ? away_runs : home_runs) += pas[i].runs_on_play;

        const std::string& game_id = pas[game_begin].game_id;
        if (away_runs == home_runs) {
            if (rejects)
                rejects->push_back({0, "game '" + game_id + "' is tied; cannot assign team_won",
                                    game_id});
            game_begin = game_end;
            continue;
        }

        // The home starter pitches top halves, the away starter bottom halves.
        for (Half pitching_half : {Half::top, Half::bottom}) {
            std::string starter;
            bool conflict = false;
            for (std::size_t i = game_begin; i < game_end; ++i) {
                const auto& pa = pas[i];
                if (pa.half != pitching_half || !pa.is_starter) continue;
                if (starter.empty())
                    starter = pa.pitcher_id;
                else if (starter != pa.pitcher_id)
                    conflict = true;
            }
            if (conflict)
                throw ValidationError("game '" + game_id + "' flags multiple starters for one team");
            if (starter.empty()) continue;  // e.g. a fixture covering one side only

            // Collect the starter's appearances in order.
            std::vector<std::size_t> mine;
            int last_inning = 0;
            int runs_allowed = 0;
            int outs_total = 0;
            for (std::size_t i = game_begin; i < game_end; ++i) {
                const auto& pa = pas[i];
                if (pa.half != pitching_half || pa.pitcher_id != starter) continue;
                if (!mine.empty() && pa.inning > last_inning + 1)
                    throw ValidationError("starter '" + starter + "' in game '" + game_id +
                                          "' appears in non-consecutive innings");
                mine.push_back(i);
                last_inning = pa.inning;
                if (opts.use_earned_runs) {
                    if (!pa.earned_runs_on_play)
                        throw ValidationError("earned-runs accounting requested but game '" +
                                              game_id + "' lacks earned_runs_on_play values");
                    runs_allowed += *pa.earned_runs_on_play;
                } else {
                    runs_allowed += pa.runs_on_play;
                }
                outs_total += pa.outs_recorded;
            }
            if (mine.empty()) continue;
            if (outs_total == 0) {
                if (rejects)
                    rejects->push_back({0, "starter '" + starter + "' in game '" + game_id +
                                               "' recorded zero outs",
                                        game_id});
                continue;
            }

            const PlateAppearance& head = pas[game_begin];
            const PlateAppearance& last = pas[mine.back()];

            StartLine s;
            s.pitcher_id = starter;
            s.game_id = game_id;
            s.year = head.year;
            s.date = head.date;
            s.park = head.park;
            s.is_home = pitching_half == Half::top;
            s.league = head.league;
            s.runs_allowed = runs_allowed;
            s.team_won = s.is_home ? home_runs > away_runs : away_runs > home_runs;

            bool inning_done = last.outs_before + last.outs_recorded == 3;
            if (inning_done) {
                s.exit_kind = ExitKind::end_of_inning;
                s.innings = std::min(last.inning, 9);
            } else {
                // Successor within the same half-inning carries the exit state.
                std::size_t next = mine.back() + 1;
                bool has_next = next < game_end && detail::same_group(pas[next], last);
                if (!has_next) {
                    // Walk-off or truncated trace: the half-inning never resumed.
                    s.exit_kind = ExitKind::end_of_inning;
                    s.innings = std::min(last.inning, 9);
                    if (diagnostics)
                        *diagnostics << "note: starter '" << starter << "' in game '" << game_id
                                     << "' ends mid-inning with no successor; treated as "
                                        "end of inning " << s.innings << "\n";
                } else if (last.inning > 9) {
                    // Past the grid: value as nine complete innings.
                    s.exit_kind = ExitKind::end_of_inning;
                    s.innings = 9;
                } else {
                    s.exit_kind = ExitKind::mid_inning;
                    s.innings = last.inning;
                    s.exit_outs = pas[next].outs_before;
                    s.exit_base = pas[next].base_state_before;
                }
            }
            out.push_back(std::move(s));
        }
        game_begin = game_end;
    }
    return out;
}

}  // namespace gridwar
