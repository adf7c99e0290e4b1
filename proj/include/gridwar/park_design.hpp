#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gridwar/types.hpp"

namespace gridwar {

// Half-inning run model: y = b0 + park + offense team-season + defense
// team-season. Indicator design [1 | P | O | D] with reference columns
// dropped. Rows are stored sparsely (each touches at most four columns), so
// normal-equation accumulation is O(rows), never materializing X.
//
// Reference levels: one park, plus one team-season per year. A single
// team-season reference is not enough on a multi-year window: within each
// other year the offense indicators and defense indicators both sum to one
// on every row, so sum(O-block) - sum(D-block) of that year is identically
// zero and the design drops rank. Pinning one team-season per year removes
// exactly those null directions and leaves the park block untouched.
class ParkDesign {
public:
    struct Row {
        float y = 0.0f;
        int park = -1;     // index into park catalog; -1 = reference park
        int offense = -1;  // index into team-season catalog; -1 = a reference team-season
        int defense = -1;
        bool home_batting = false;
        int year = 0;
    };

    std::vector<Row> rows;
    std::vector<std::string> parks;         // non-reference parks, catalog order
    std::vector<std::string> team_seasons;  // non-reference team-seasons, catalog order
    std::string reference_park;
    std::vector<std::string> reference_team_seasons;  // one per year, earliest first

    Eigen::Index n_cols() const {
        return 1 + static_cast<Eigen::Index>(parks.size()) +
               2 * static_cast<Eigen::Index>(team_seasons.size());
    }
    Eigen::Index park_col(int park_idx) const { return 1 + park_idx; }
    Eigen::Index off_col(int ts_idx) const {
        return 1 + static_cast<Eigen::Index>(parks.size()) + ts_idx;
    }
    Eigen::Index def_col(int ts_idx) const {
        return 1 + static_cast<Eigen::Index>(parks.size() + team_seasons.size()) + ts_idx;
    }

    std::string column_name(Eigen::Index c) const {
        if (c == 0) return "intercept";
        c -= 1;
        if (c < static_cast<Eigen::Index>(parks.size())) return "park=" + parks[c];
        c -= static_cast<Eigen::Index>(parks.size());
        if (c < static_cast<Eigen::Index>(team_seasons.size())) return "off=" + team_seasons[c];
        c -= static_cast<Eigen::Index>(team_seasons.size());
        return "def=" + team_seasons[c];
    }

    // All parks including the reference, catalog order with reference first.
    std::vector<std::string> all_parks() const {
        std::vector<std::string> out;
        out.reserve(parks.size() + 1);
        out.push_back(reference_park);
        out.insert(out.end(), parks.begin(), parks.end());
        return out;
    }
};

// Builds the design from half-inning records inside the window.
// The reference park is ANA when present (else the lexicographically first
// park); reference team-seasons are the reference franchise's, one per year.
inline ParkDesign build_park_design(const std::vector<HalfInningRecord>& half_innings,
                                    YearWindow window) {
    std::set<std::string> park_set;
    std::set<std::string> ts_set;
    std::set<int> years;
    for (const auto& h : half_innings) {
        if (!window.contains(h.year)) continue;
        park_set.insert(h.park);
        ts_set.insert(h.offense_team_season);
        ts_set.insert(h.defense_team_season);
        years.insert(h.year);
    }
    if (park_set.empty()) throw ValidationError("park design: no half-innings in window");

    ParkDesign d;
    d.reference_park = park_set.count("ANA") ? "ANA" : *park_set.begin();

    // Reference franchise: ANA when any of its team-seasons appear, else the
    // franchise of the lexicographically first team-season.
    std::string ref_team;
    for (const auto& ts : ts_set) {
        std::string team = ts.substr(0, ts.size() - 4);
        if (team == "ANA") {
            ref_team = "ANA";
            break;
        }
        if (ref_team.empty()) ref_team = team;
    }
    std::set<std::string> ref_ts;
    for (int y : years) {
        std::string code = team_season_code(ref_team, y);
        if (!ts_set.count(code))
            throw ValidationError("park design: reference franchise '" + ref_team +
                                  "' missing in year " + std::to_string(y));
        d.reference_team_seasons.push_back(code);
        ref_ts.insert(code);
    }

    std::map<std::string, int> park_idx, ts_idx;
    for (const auto& p : park_set)
        if (p != d.reference_park) {
            park_idx[p] = static_cast<int>(d.parks.size());
            d.parks.push_back(p);
        }
    for (const auto& ts : ts_set)
        if (!ref_ts.count(ts)) {
            ts_idx[ts] = static_cast<int>(d.team_seasons.size());
            d.team_seasons.push_back(ts);
        }

    d.rows.reserve(half_innings.size());
    for (const auto& h : half_innings) {
        if (!window.contains(h.year)) continue;
        ParkDesign::Row row;
        row.y = static_cast<float>(h.runs);
        auto p = park_idx.find(h.park);
        row.park = p == park_idx.end() ? -1 : p->second;
        auto o = ts_idx.find(h.offense_team_season);
        row.offense = o == ts_idx.end() ? -1 : o->second;
        auto f = ts_idx.find(h.defense_team_season);
        row.defense = f == ts_idx.end() ? -1 : f->second;
        row.home_batting = h.half == Half::bottom;
        row.year = h.year;
        d.rows.push_back(row);
    }
    return d;
}

}  // namespace gridwar
