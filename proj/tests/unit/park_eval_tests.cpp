#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gridwar/park_eval.hpp"

using namespace gridwar;

namespace {

HalfInningRecord half(const std::string& game, const std::string& park, Half h,
                      const std::string& offense, const std::string& defense, int runs,
                      int year) {
    HalfInningRecord rec;
    rec.game_id = game;
    rec.year = year;
    rec.park = park;
    rec.inning = 1;
    rec.half = h;
    rec.offense_team_season = team_season_code(offense, year);
    rec.defense_team_season = team_season_code(defense, year);
    rec.runs = runs;
    return rec;
}

// Balanced three-team league; each park's rows take the value its park was
// assigned (top half) and that value plus `spread` (bottom half).
std::vector<HalfInningRecord> league_by_park(const std::map<std::string, int>& park_runs,
                                             int spread, int year) {
    std::vector<HalfInningRecord> out;
    int g = 0;
    for (const auto& [home, base] : park_runs)
        for (const auto& [away, _] : park_runs) {
            if (home == away) continue;
            std::string game = "G" + std::to_string(year) + std::to_string(g++);
            out.push_back(half(game, home, Half::top, away, home, base, year));
            out.push_back(half(game, home, Half::bottom, home, away, base + spread, year));
        }
    return out;
}

}  // namespace

TEST_CASE("a perfectly linear effect set predicts exactly", "[park_eval]") {
    // Runs are exactly 2 + alpha(park); the refit recovers scale 1 and
    // intercept 2, so both error scales vanish.
    std::map<std::string, int> park_runs = {{"ANA", 1}, {"BOS", 2}, {"CHW", 3}};
    std::vector<HalfInningRecord> halves = league_by_park(park_runs, 0, 2019);

    ParkEffectSet fx;
    fx.alpha = {{"ANA", -1.0}, {"BOS", 0.0}, {"CHW", 1.0}};

    OosEvaluation ev = evaluate_out_of_sample(fx, halves, {2019, 2019});
    REQUIRE(ev.rmse == Catch::Approx(0.0).margin(1e-9));
    REQUIRE(ev.ecological_rmse == Catch::Approx(0.0).margin(1e-9));

    // Every row equals its park mean, so both baselines are the between-park
    // spread: sqrt(((2-1)^2 + 0 + (3-2)^2) / 3).
    REQUIRE(ev.mean_ecological_rmse == Catch::Approx(std::sqrt(2.0 / 3.0)).margin(1e-12));
    REQUIRE(ev.mean_rmse == Catch::Approx(std::sqrt(2.0 / 3.0)).margin(1e-12));
}

TEST_CASE("mean baselines split within- and between-park error", "[park_eval]") {
    // Park rows {0,2}, {1,3}, {2,4}: park means 1, 2, 3 and overall mean 2.
    // Per-row deviations square to 20/12 = 5/3; park-mean deviations to 2/3.
    std::map<std::string, int> park_runs = {{"ANA", 0}, {"BOS", 1}, {"CHW", 2}};
    std::vector<HalfInningRecord> halves = league_by_park(park_runs, 2, 2019);

    ParkEffectSet zero;
    zero.alpha = {{"ANA", 0.0}, {"BOS", 0.0}, {"CHW", 0.0}};

    OosEvaluation ev = evaluate_out_of_sample(zero, halves, {2019, 2019});
    REQUIRE(ev.mean_rmse == Catch::Approx(std::sqrt(5.0 / 3.0)).margin(1e-12));
    REQUIRE(ev.mean_ecological_rmse == Catch::Approx(std::sqrt(2.0 / 3.0)).margin(1e-12));
    // The refit can only improve on the constant prediction.
    REQUIRE(ev.rmse <= ev.mean_rmse + 1e-12);
}

TEST_CASE("parks missing from the effect set are listed", "[park_eval]") {
    std::map<std::string, int> park_runs = {{"ANA", 1}, {"BOS", 2}, {"CHW", 3}};
    std::vector<HalfInningRecord> halves = league_by_park(park_runs, 0, 2019);

    ParkEffectSet partial;
    partial.alpha = {{"ANA", 0.0}};
    REQUIRE_THROWS_WITH(evaluate_out_of_sample(partial, halves, {2019, 2019}),
                        Catch::Matchers::ContainsSubstring("BOS, CHW"));
}

TEST_CASE("the evaluation window must contain data", "[park_eval]") {
    std::map<std::string, int> park_runs = {{"ANA", 1}, {"BOS", 2}, {"CHW", 3}};
    std::vector<HalfInningRecord> halves = league_by_park(park_runs, 0, 2019);
    ParkEffectSet fx;
    fx.alpha = {{"ANA", 0.0}, {"BOS", 0.0}, {"CHW", 0.0}};
    REQUIRE_THROWS_AS(evaluate_out_of_sample(fx, halves, {2001, 2002}), ValidationError);
}

TEST_CASE("lambda tuning scores each grid point on the held-out window", "[park_eval]") {
    // Identical park structure in both years: the unregularized fit transfers
    // perfectly, so lambda 0 wins and the sweep is ordered like the grid.
    std::map<std::string, int> park_runs = {{"ANA", 1}, {"BOS", 2}, {"CHW", 3}};
    std::vector<HalfInningRecord> halves = league_by_park(park_runs, 0, 2018);
    for (const auto& h : league_by_park(park_runs, 0, 2019)) halves.push_back(h);

    std::vector<double> grid = {0.0, 1.0, 1e6};
    LambdaSweepResult sweep = tune_lambda(halves, {2018, 2018}, {2019, 2019}, grid);

    REQUIRE(sweep.entries.size() == 3);
    for (std::size_t i = 0; i < grid.size(); ++i) REQUIRE(sweep.entries[i].lambda == grid[i]);
    REQUIRE(sweep.best_lambda == 0.0);
    REQUIRE(sweep.entries[0].rmse == Catch::Approx(0.0).margin(1e-9));
    REQUIRE(sweep.entries[2].rmse > sweep.entries[0].rmse);
    // Heavy shrinkage leaves the between-park spread unexplained.
    REQUIRE(sweep.entries[2].ecological_rmse > 0.1);
}

TEST_CASE("an empty lambda grid is rejected", "[park_eval]") {
    std::map<std::string, int> park_runs = {{"ANA", 1}, {"BOS", 2}, {"CHW", 3}};
    std::vector<HalfInningRecord> halves = league_by_park(park_runs, 0, 2019);
    REQUIRE_THROWS_WITH(tune_lambda(halves, {2019, 2019}, {2019, 2019}, {}),
                        Catch::Matchers::ContainsSubstring("empty grid"));
}
