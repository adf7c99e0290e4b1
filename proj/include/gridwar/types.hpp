#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gridwar/base_state.hpp"
#include "gridwar/common.hpp"

namespace gridwar {

enum class League { AL, NL };

inline std::string to_string(League lg) { return lg == League::AL ? "AL" : "NL"; }

inline League league_from_string(std::string_view s) {
    if (s == "AL") return League::AL;
    if (s == "NL") return League::NL;
    throw ValidationError("unknown league '" + std::string(s) + "'");
}

enum class Half { top, bottom };

inline std::string to_string(Half h) { return h == Half::top ? "top" : "bottom"; }

inline Half half_from_string(std::string_view s) {
    if (s == "top" || s == "T") return Half::top;
    if (s == "bottom" || s == "B") return Half::bottom;
    throw ValidationError("unknown half '" + std::string(s) + "'");
}

// One pitch-sequence outcome row of the play-by-play log.
struct PlateAppearance {
    std::string game_id;
    int year = 0;
    std::string date;
    std::string home_team;
    std::string away_team;
    League league = League::AL;
    std::string park;
    int inning = 1;
    Half half = Half::top;
    std::string pitcher_id;
    std::string batter_id;
    bool is_starter = false;
    int outs_before = 0;
    BaseState base_state_before;
    int runs_on_play = 0;
    int outs_recorded = 0;
    // Present only when the source maps an earned-runs column; used for the
    // optional earned-runs accounting of a starter's R.
    std::optional<int> earned_runs_on_play;
};

// A row that failed validation, kept for audit.
struct RejectRow {
    std::size_t line = 0;  // 1-based line number in the source stream
    std::string reason;
    std::string raw;
};

struct HalfInningRecord {
    std::string game_id;
    int year = 0;
    std::string park;
    int inning = 1;
    Half half = Half::top;
    std::string offense_team_season;  // e.g. ANA2017
    std::string defense_team_season;
    int runs = 0;
};

enum class ExitKind { end_of_inning, mid_inning };

inline std::string to_string(ExitKind k) {
    return k == ExitKind::end_of_inning ? "end_of_inning" : "mid_inning";
}

inline ExitKind exit_kind_from_string(std::string_view s) {
    if (s == "end_of_inning") return ExitKind::end_of_inning;
    if (s == "mid_inning") return ExitKind::mid_inning;
    throw ValidationError("unknown exit kind '" + std::string(s) + "'");
}

// One starting pitcher's line for one game.
struct StartLine {
    std::string pitcher_id;
    std::string game_id;
    int year = 0;
    std::string date;
    std::string park;
    bool is_home = false;
    League league = League::AL;
    ExitKind exit_kind = ExitKind::end_of_inning;
    int innings = 1;                     // I; for mid-inning exits, the inning being pitched
    std::optional<int> exit_outs;        // O, mid-inning only
    std::optional<BaseState> exit_base;  // S, mid-inning only
    int runs_allowed = 0;                // R
    bool team_won = false;
};

inline std::string team_season_code(const std::string& team, int year) {
    return team + std::to_string(year);
}

}  // namespace gridwar
